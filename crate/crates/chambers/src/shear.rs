//! Sheared binomial systems `1 - prod_i l_i^b_(j,i) = 0`, `j = 1..k`, in
//! affine factors `l_i` of `k` variables, restricted to one sign cell.

use fewroots_core::rational::{pow2, sign, to_f64};
use fewroots_core::{RatMatrix, Rational, SturmSequence, UniPoly};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::ChamberError;

/// `coeffs . x + constant`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineForm {
    #[serde(serialize_with = "crate::ser::rationals")]
    pub coeffs: Vec<Rational>,
    #[serde(serialize_with = "crate::ser::rational")]
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(c, v)| to_f64(c) * v).sum::<f64>() + to_f64(&self.constant)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShearSystem {
    pub factors: Vec<AffineForm>,
    /// One row per equation, one column per factor.
    #[serde(serialize_with = "crate::ser::rational_rows")]
    pub exponents: Vec<Vec<Rational>>,
    /// Required sign of each factor.
    pub sign_cell: Vec<i8>,
}

impl ShearSystem {
    pub fn new(
        factors: Vec<AffineForm>,
        exponents: Vec<Vec<Rational>>,
        sign_cell: Vec<i8>,
    ) -> Result<Self, ChamberError> {
        let k = exponents.len();
        let j = factors.len();
        if k == 0 || j < k {
            return Err(ChamberError::Shear(format!("{k} equations need at least {k} factors, got {j}")));
        }
        if factors.iter().any(|f| f.coeffs.len() != k) {
            return Err(ChamberError::Shear(format!("every factor needs {k} coefficients")));
        }
        if exponents.iter().any(|r| r.len() != j) || sign_cell.len() != j {
            return Err(ChamberError::Shear(format!("exponent rows and sign cell need {j} entries")));
        }
        if sign_cell.iter().any(|s| s.abs() != 1) {
            return Err(ChamberError::Shear("sign cell entries must be +1 or -1".into()));
        }
        if RatMatrix::from_rows(&exponents)?.rank() < k {
            return Err(ChamberError::Shear("exponent rows are linearly dependent".into()));
        }
        Ok(ShearSystem { factors, exponents, sign_cell })
    }

    /// A univariate system with all factors required positive.
    pub fn univariate(factors: Vec<(Rational, Rational)>, exponents: Vec<Rational>) -> Result<Self, ChamberError> {
        let j = factors.len();
        let factors = factors.into_iter().map(|(a, c)| AffineForm::new(vec![a], c)).collect();
        Self::new(factors, vec![exponents], vec![1; j])
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn in_cell(&self, x: &[f64]) -> bool {
        self.factors.iter().zip(&self.sign_cell).all(|(f, &s)| f.eval_f64(x) * f64::from(s) > 0.0)
    }

    /// `sum_i b_(j,i) ln|l_i(x)|` for each equation; zero exactly at roots.
    pub fn log_residuals(&self, x: &[f64]) -> Vec<f64> {
        let logs: Vec<f64> = self.factors.iter().map(|f| f.eval_f64(x).abs().ln()).collect();
        self.exponents.iter().map(|row| row.iter().zip(&logs).map(|(b, l)| to_f64(b) * l).sum()).collect()
    }

    /// The open interval of the sign cell for a univariate system, with
    /// `None` for an infinite end, or `None` overall when the cell is empty.
    fn cell_interval(&self) -> Option<(Option<Rational>, Option<Rational>)> {
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for (f, &s) in self.factors.iter().zip(&self.sign_cell) {
            let a = &f.coeffs[0] * Rational::from_integer(s.into());
            let c = &f.constant * Rational::from_integer(s.into());
            if a.is_zero() {
                if !c.is_positive() {
                    return None;
                }
                continue;
            }
            let root = -&c / &a;
            if a.is_positive() {
                lo = Some(lo.map_or(root.clone(), |l| l.max(root)));
            } else {
                hi = Some(hi.map_or(root.clone(), |h| h.min(root)));
            }
        }
        match (&lo, &hi) {
            (Some(l), Some(h)) if l >= h => None,
            _ => Some((lo, hi)),
        }
    }

    /// Number of non-degenerate roots of a univariate system inside its sign
    /// cell. The log residual is monotone between consecutive zeros of its
    /// derivative, whose numerator is a polynomial isolated exactly; a root
    /// is counted for each strict sign change between consecutive extremal
    /// values. The values themselves are `f64` approximations.
    pub fn univariate_root_count(&self) -> Result<usize, ChamberError> {
        if self.dim() != 1 {
            return Err(ChamberError::Shear("root counting needs a univariate system".into()));
        }
        let Some((lo, hi)) = self.cell_interval() else { return Ok(0) };
        let b = &self.exponents[0];
        let lines: Vec<UniPoly> =
            self.factors.iter().map(|f| UniPoly::linear(f.coeffs[0].clone(), f.constant.clone())).collect();
        let mut num = UniPoly::zero();
        for (i, (bi, factor)) in b.iter().zip(&self.factors).enumerate() {
            let mut term = UniPoly::constant(bi * &factor.coeffs[0]);
            for (k, l) in lines.iter().enumerate() {
                if k != i {
                    term = &term * l;
                }
            }
            num = &num + &term;
        }
        if num.is_zero() {
            return Err(ChamberError::Degenerate("log residual is constant on the cell".into()));
        }

        let mut values = vec![self.end_value(lo.as_ref())];
        if num.degree().unwrap_or(0) > 0 {
            let sturm = SturmSequence::new(&num)?;
            let bound = num.cauchy_bound();
            let a = lo.clone().unwrap_or_else(|| -&bound - Rational::from_integer(1.into()));
            let c = hi.clone().unwrap_or_else(|| &bound + Rational::from_integer(1.into()));
            for mut iv in sturm.isolate(Some((&a, &c))) {
                if lo.as_ref().is_some_and(|l| iv.hi <= *l) || hi.as_ref().is_some_and(|h| iv.lo >= *h) {
                    continue;
                }
                iv.refine(&pow2(-60));
                values.push(self.log_residuals(&[to_f64(&iv.midpoint())])[0]);
            }
        }
        values.push(self.end_value(hi.as_ref()));
        Ok(values.windows(2).filter(|w| w[0] * w[1] < 0.0).count())
    }

    /// The log residual near one end of the cell, with `+-f64::MAX` standing
    /// in for an infinite limit.
    fn end_value(&self, end: Option<&Rational>) -> f64 {
        let b = &self.exponents[0];
        let terms = self.factors.iter().zip(b);
        let (weight, finite): (Rational, f64) = match end {
            // near x, ln|l_i| = ln|a_i| + ln|lambda - x| for the factors vanishing there
            Some(x) => terms.fold((Rational::zero(), 0.0), |(w, v), (f, bi)| {
                let at = &f.coeffs[0] * x + &f.constant;
                if at.is_zero() {
                    (w + bi, v + to_f64(bi) * to_f64(&f.coeffs[0].abs()).ln())
                } else {
                    (w, v + to_f64(bi) * to_f64(&at.abs()).ln())
                }
            }),
            // near infinity, ln|l_i| = ln|a_i| + ln|lambda| for nonconstant factors
            None => terms.fold((Rational::zero(), 0.0), |(w, v), (f, bi)| {
                if f.coeffs[0].is_zero() {
                    (w, v + to_f64(bi) * to_f64(&f.constant.abs()).ln())
                } else {
                    (w + bi, v + to_f64(bi) * to_f64(&f.coeffs[0].abs()).ln())
                }
            }),
        };
        if weight.is_zero() {
            finite
        } else if end.is_some() {
            // ln|lambda - x| -> -inf
            -f64::from(sign(&weight)) * f64::MAX
        } else {
            f64::from(sign(&weight)) * f64::MAX
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn dependent_rows_rejected() {
        let f = vec![AffineForm::new(vec![int(1), int(0)], int(1)), AffineForm::new(vec![int(0), int(1)], int(1))];
        let err = ShearSystem::new(f.clone(), vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![1, 1]);
        assert!(matches!(err, Err(ChamberError::Shear(_))));
        assert!(ShearSystem::new(f, vec![vec![int(1), int(2)], vec![int(2), int(3)]], vec![1, 1]).is_ok());
    }

    #[test]
    fn binomial_has_one_root() {
        // lambda^2 (1 - lambda)^-1 = 1 on (0, 1): lambda = (sqrt 5 - 1)/2
        let s = ShearSystem::univariate(vec![(int(1), int(0)), (int(-1), int(1))], vec![int(2), int(-1)]).unwrap();
        assert_eq!(s.univariate_root_count().unwrap(), 1);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        assert!(s.log_residuals(&[g])[0].abs() < 1e-12);
        assert!(s.in_cell(&[g]));
    }

    #[test]
    fn two_roots_with_three_factors() {
        // lambda (2 - lambda) / (3/4) = 1 has roots 1/2 and 3/2
        let s = ShearSystem::univariate(
            vec![(int(1), int(0)), (int(-1), int(2)), (int(0), rat(3, 4))],
            vec![int(1), int(1), int(-1)],
        )
        .unwrap();
        assert_eq!(s.univariate_root_count().unwrap(), 2);
    }

    #[test]
    fn empty_cell_has_no_roots() {
        let s = ShearSystem::univariate(vec![(int(1), int(0)), (int(1), int(-1))], vec![int(1), int(1)]);
        let mut s = s.unwrap();
        s.sign_cell = vec![-1, 1];
        assert_eq!(s.univariate_root_count().unwrap(), 0);
    }

    fn small() -> impl Strategy<Value = i64> {
        -4i64..=4
    }

    proptest! {
        #[test]
        fn univariate_count_at_most_n_plus_one(
            n in 1usize..=5,
            forms in prop::collection::vec((small(), small()), 6),
            exps in prop::collection::vec(small(), 6),
        ) {
            let factors: Vec<(Rational, Rational)> =
                forms.iter().take(n + 1).map(|&(a, c)| (int(a), int(c))).collect();
            let b: Vec<Rational> = exps.iter().take(n + 1).map(|&e| int(e)).collect();
            prop_assume!(b.iter().any(|x| !x.is_zero()));
            prop_assume!(factors.iter().all(|(a, c)| !(a.is_zero() && c.is_zero())));
            let s = ShearSystem::univariate(factors, b).unwrap();
            if let Ok(count) = s.univariate_root_count() {
                prop_assert!(count <= n + 1, "{count} roots with {} factors", n + 1);
            }
        }
    }
}
