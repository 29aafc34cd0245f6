//! Closed-form alpha test for `(x^(2d) + a y^d - y, y^(2d) + b x^d - x)`.
//!
//! Each equation is a sum of a polynomial in `x` and a polynomial in `y`, so
//! its `k`-th derivative tensor divided by `k!` acts on `v` as
//! `M_k (v_1^k, v_2^k)`. This bounds the `k`-th term of gamma by the largest
//! singular value of `J^{-1} M_k`, computed from the 2x2 characteristic
//! polynomial with rational operations only.

use fewroots_core::rational::{int, rat};
use fewroots_core::{RatMatrix, Rational};
use num_traits::Zero;

use crate::error::CertifyError;

fn binom(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut r = int(1);
    for i in 0..k {
        r = r * int(i64::from(n - i)) / int(i64::from(i + 1));
    }
    r
}

fn pow(x: &Rational, e: i64) -> Rational {
    if e < 0 {
        Rational::zero()
    } else {
        x.pow(e as i32)
    }
}

/// `sigma(P)^2 < r` for a 2x2 matrix `P`, decided exactly: the largest
/// eigenvalue of `P^T P` is below `r` iff `2r > tr` and `r^2 - r tr + det > 0`.
fn sigma_sq_below(p: &RatMatrix, r: &Rational) -> bool {
    let tr: Rational = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| &p[(i, j)] * &p[(i, j)]).sum();
    let d = &p[(0, 0)] * &p[(1, 1)] - &p[(0, 1)] * &p[(1, 0)];
    let det = &d * &d;
    let two_r = r * int(2);
    two_r > tr && r * r - r * &tr + det > Rational::zero()
}

/// The closed-form test for general parameters. Returns `true` when the
/// singular-value inequality holds for every `k` in `2..=2d`.
pub fn haas_fast_alpha_with(a: &Rational, b: &Rational, d: u32, z: &[Rational; 2]) -> Result<bool, CertifyError> {
    let (x, y) = (&z[0], &z[1]);
    let dd = i64::from(d);
    let two_d = int(2 * dd);
    let jac = RatMatrix::from_rows(&[
        vec![&two_d * pow(x, 2 * dd - 1), a * int(dd) * pow(y, dd - 1) - int(1)],
        vec![b * int(dd) * pow(x, dd - 1) - int(1), &two_d * pow(y, 2 * dd - 1)],
    ])?;
    let minv = jac.inverse().map_err(|_| CertifyError::SingularMatrix)?;
    let h = [pow(x, 2 * dd) + a * pow(y, dd) - y, pow(y, 2 * dd) + b * pow(x, dd) - x];
    let corr = minv.mul_vec(&h);
    let beta2: Rational = corr.iter().map(|c| c * c).sum();
    if beta2.is_zero() {
        return Ok(true);
    }
    let c2 = rat(9, 10_000);
    for k in 2..=2 * d {
        let kk = i64::from(k);
        let mk = RatMatrix::from_rows(&[
            vec![binom(2 * d, k) * pow(x, 2 * dd - kk), a * binom(d, k) * pow(y, dd - kk)],
            vec![b * binom(d, k) * pow(x, dd - kk), binom(2 * d, k) * pow(y, 2 * dd - kk)],
        ])?;
        let p = minv.mul(&mk)?;
        let e = (k - 1) as i32;
        let r = c2.pow(e) / beta2.pow(e);
        if !sigma_sq_below(&p, &r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The test for the counterexample system with `a = b = 44/31`, `d = 3`.
pub fn haas_fast_alpha(z: &[Rational; 2]) -> Result<bool, CertifyError> {
    haas_fast_alpha_with(&rat(44, 31), &rat(44, 31), 3, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::parse_rational;

    fn p(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn six_digit_inputs_pass() {
        for (x, y) in [("0.584513", "0.818672"), ("0.740239", "0.740239")] {
            assert!(haas_fast_alpha(&[p(x), p(y)]).unwrap());
        }
    }

    #[test]
    fn far_point_fails() {
        assert!(!haas_fast_alpha(&[int(10), int(10)]).unwrap());
    }

    #[test]
    fn binomial_out_of_range_is_zero() {
        assert_eq!(binom(3, 4), Rational::zero());
        assert_eq!(binom(6, 2), int(15));
    }

    #[test]
    fn sigma_of_diagonal() {
        let m = RatMatrix::from_rows(&[vec![int(3), int(0)], vec![int(0), int(1)]]).unwrap();
        assert!(sigma_sq_below(&m, &rat(91, 10)));
        assert!(!sigma_sq_below(&m, &int(9)));
    }
}
