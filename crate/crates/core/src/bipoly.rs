use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::{CoreError, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial in `x, y` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: Rational) {
        let v = self.terms.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| if v == Var::X { i } else { j }).max()
    }

    /// Coefficients with respect to `v`, each a polynomial in the other variable.
    pub fn coeffs_in(&self, v: Var) -> Vec<UniPoly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut cols: Vec<Vec<Rational>> = vec![Vec::new(); d + 1];
        for (&(i, j), c) in &self.terms {
            let (k, other) = if v == Var::X { (i, j) } else { (j, i) };
            let col = &mut cols[k as usize];
            if col.len() <= other as usize {
                col.resize(other as usize + 1, Rational::zero());
            }
            col[other as usize] += c;
        }
        cols.into_iter().map(UniPoly::new).collect()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), c)| crate::rational::to_f64(c) * x.powi(i as i32) * y.powi(j as i32)).sum()
    }

    /// Substitutes a value for `v`, leaving a polynomial in the other variable.
    pub fn specialize(&self, v: Var, value: &Rational) -> UniPoly {
        let mut out = UniPoly::zero();
        for (&(i, j), c) in &self.terms {
            let (k, other) = if v == Var::X { (i, j) } else { (j, i) };
            let coef = c * num_traits::pow(value.clone(), k as usize);
            out = &out + &UniPoly::monomial(coef, other as usize);
        }
        out
    }

    pub fn partial(&self, v: Var) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| {
            let k = if v == Var::X { i } else { j };
            if k == 0 {
                return None;
            }
            let e = if v == Var::X { (i - 1, j) } else { (i, j - 1) };
            Some((e, c * Rational::from_integer(k.into())))
        }))
    }
}

/// Resultant with respect to `eliminate`, as a polynomial in the other
/// variable: the Sylvester determinant computed by fraction-free (Bareiss)
/// elimination over `Q[t]`.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<UniPoly, CoreError> {
    let dp = p.degree_in(eliminate).unwrap_or(0) as usize;
    let dq = q.degree_in(eliminate).unwrap_or(0) as usize;
    if dp == 0 || dq == 0 {
        return Err(CoreError::DegreeError);
    }
    let pc = p.coeffs_in(eliminate);
    let qc = q.coeffs_in(eliminate);
    let n = dp + dq;
    let mut m = vec![vec![UniPoly::zero(); n]; n];
    // rows 0..dq: shifts of p (highest coefficient first); rows dq..n: shifts of q
    for r in 0..dq {
        for k in 0..=dp {
            m[r][r + k] = pc[dp - k].clone();
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            m[dq + r][r + k] = qc[dq - k].clone();
        }
    }
    Ok(bareiss_det(m))
}

/// Determinant of a square matrix over `Q[t]` by Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut prev = UniPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if prev.degree() == Some(0) && prev.lead().is_one() { num } else { num.exact_div(&prev) };
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn bp(terms: &[((u32, u32), i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn sylvester_small() {
        // res_y(y - x, y^2 - 2) = x^2 - 2
        let p = bp(&[((0, 1), 1), ((1, 0), -1)]);
        let q = bp(&[((0, 2), 1), ((0, 0), -2)]);
        let r = resultant(&p, &q, Var::Y).unwrap();
        assert_eq!(r, UniPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn common_factor_gives_zero() {
        let p = bp(&[((0, 1), 1)]);
        assert!(resultant(&p, &p, Var::Y).unwrap().is_zero());
    }

    #[test]
    fn constant_in_variable_rejected() {
        let p = bp(&[((1, 0), 1)]);
        let q = bp(&[((0, 1), 1)]);
        assert_eq!(resultant(&p, &q, Var::Y), Err(CoreError::DegreeError));
    }

    #[test]
    fn specialize_and_partial() {
        let p = bp(&[((2, 1), 3), ((0, 0), 1)]);
        assert_eq!(p.specialize(Var::X, &int(2)), UniPoly::from_ints(&[1, 12]));
        assert_eq!(p.partial(Var::X), bp(&[((1, 1), 6)]));
    }
}
