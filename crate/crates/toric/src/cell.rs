use fewroots_core::{IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::ToricError;
use crate::supports::SupportConfig;

/// An index set `C` of `n` non-origin points whose determinant is odd, with
/// the data needed to reduce coordinates. Indices are 0-based positions in
/// the normalized configuration (position 0 is the origin).
#[derive(Debug, Clone, PartialEq)]
pub struct OddCell {
    pub indices: Vec<usize>,
    /// Non-origin indices outside `C`, in increasing order.
    pub complement: Vec<usize>,
    pub det: BigInt,
    pub ac_inverse: RatMatrix,
    /// `A_C^{-1} A_{C'}`, an `n x (m - n - 1)` matrix.
    pub exponent_block: RatMatrix,
}

impl OddCell {
    /// 1-based labels, matching the usual `a_1 = O` convention.
    pub fn labels(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

fn columns(config: &SupportConfig, idx: &[usize]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..config.n).map(|r| idx.iter().map(|&i| config.points[i][r]).collect()).collect();
    IntMatrix::from_rows(&rows).expect("rectangular")
}

/// Oddness predicate: `indices` are `n` distinct non-origin positions whose
/// columns have odd determinant.
pub fn is_odd_cell(config: &SupportConfig, indices: &[usize]) -> bool {
    if indices.len() != config.n || indices.iter().any(|&i| i == 0 || i >= config.len()) {
        return false;
    }
    let mut s = indices.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != indices.len() {
        return false;
    }
    columns(config, indices).det().is_ok_and(|d| d.is_odd())
}

/// Builds the cell data for a given index set.
pub fn odd_cell(config: &SupportConfig, indices: &[usize]) -> Result<OddCell, ToricError> {
    if !config.normalized {
        return Err(ToricError::NotNormalized);
    }
    if !is_odd_cell(config, indices) {
        return Err(ToricError::NotOddCell(indices.to_vec()));
    }
    let ac = columns(config, indices);
    let det = ac.det()?;
    let complement: Vec<usize> = (1..config.len()).filter(|i| !indices.contains(i)).collect();
    let ac_inverse = ac.to_rational().inverse()?;
    let exponent_block = ac_inverse.mul(&columns(config, &complement).to_rational())?;
    Ok(OddCell { indices: indices.to_vec(), complement, det, ac_inverse, exponent_block })
}

/// Lexicographically first odd cell among the non-origin points.
pub fn find_odd_cell(config: &SupportConfig) -> Result<OddCell, ToricError> {
    if !config.normalized {
        return Err(ToricError::NotNormalized);
    }
    let m = config.len();
    let n = config.n;
    if n == 0 || m < n + 2 {
        return Err(ToricError::NoOddCell);
    }
    let mut c: Vec<usize> = (1..=n).collect();
    loop {
        let d = columns(config, &c).det()?;
        if !d.is_zero() && d.is_odd() {
            return odd_cell(config, &c);
        }
        // next combination of {1..m-1}
        let mut i = n;
        loop {
            if i == 0 {
                return Err(ToricError::NoOddCell);
            }
            i -= 1;
            if c[i] < m - n + i {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..n {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::rat;

    fn haas_shifted() -> SupportConfig {
        SupportConfig::new(
            3,
            vec![vec![6, 0, 0], vec![0, 3, 0], vec![0, 1, 0], vec![0, 6, 1], vec![3, 0, 1], vec![1, 0, 1]],
        )
        .unwrap()
        .with_origin(0)
        .unwrap()
    }

    #[test]
    fn line_trinomial() {
        let c = SupportConfig::new(1, vec![vec![0], vec![1], vec![2]]).unwrap().normalize().unwrap();
        let cell = find_odd_cell(&c).unwrap();
        assert_eq!(cell.labels(), vec![2]);
        assert_eq!(cell.det, BigInt::from(1));
    }

    #[test]
    fn haas_cell_three_four_six() {
        let c = haas_shifted();
        assert!(is_odd_cell(&c, &[2, 3, 5]));
        let cell = odd_cell(&c, &[2, 3, 5]).unwrap();
        assert_eq!(cell.det.magnitude(), &35u32.into());
        let expect = [[rat(33, 35), rat(-12, 35)], [rat(12, 35), rat(2, 35)], [rat(-12, 35), rat(33, 35)]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(&cell.exponent_block[(i, j)], v);
            }
        }
        assert_eq!(cell.complement, vec![1, 4]);
        let first = find_odd_cell(&c).unwrap();
        assert!(is_odd_cell(&c, &first.indices));
    }

    #[test]
    fn predicate_rejects_even_and_origin() {
        let c = haas_shifted();
        assert!(!is_odd_cell(&c, &[0, 2, 3]));
        assert!(!is_odd_cell(&c, &[2, 2, 3]));
    }
}
