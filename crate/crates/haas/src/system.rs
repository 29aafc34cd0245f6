//! `H_(a,b,d) = (x^(2d) + a y^d - y, y^(2d) + b x^d - x)`.

use fewroots_certify::SparseSystem;
use fewroots_chambers::{build_atlas, AtlasOptions, ChamberAtlas, CriticalSet, NodeOptions};
use fewroots_core::rational::int;
use fewroots_core::{BiPoly, Rational};
use fewroots_toric::{cayley_embed, curve_for, integer_exponents, CayleyConfig, ReducedCurve, SupportConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::HaasError;

/// Points of the Cayley configuration outside the odd cell used for the
/// reduced curve are the `a` and `b` monomials, so the reduced coordinates
/// are `a` and `b` up to sign.
pub const ODD_CELL: [usize; 3] = [2, 3, 5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaasSystem {
    #[serde(serialize_with = "crate::ser::rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub b: Rational,
    pub d: u32,
    #[serde(skip)]
    pub h1: BiPoly,
    #[serde(skip)]
    pub h2: BiPoly,
}

impl HaasSystem {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self, HaasError> {
        if d == 0 {
            return Err(HaasError::BadParameters("d must be positive".into()));
        }
        if a.is_zero() || b.is_zero() {
            return Err(HaasError::BadParameters("a and b must be nonzero".into()));
        }
        let h1 = BiPoly::from_terms([((2 * d, 0), int(1)), ((0, d), a.clone()), ((0, 1), int(-1))]);
        let h2 = BiPoly::from_terms([((0, 2 * d), int(1)), ((d, 0), b.clone()), ((1, 0), int(-1))]);
        Ok(HaasSystem { a, b, d, h1, h2 })
    }

    pub fn sparse(&self) -> SparseSystem {
        SparseSystem::from_bipolys(&self.h1, &self.h2)
    }

    /// Supports of `h1` and `h2` in the order `x^(2d), y^d, y` and
    /// `y^(2d), x^d, x`.
    pub fn supports(d: u32) -> [Vec<Vec<i64>>; 2] {
        let d = i64::from(d);
        [vec![vec![2 * d, 0], vec![0, d], vec![0, 1]], vec![vec![0, 2 * d], vec![d, 0], vec![1, 0]]]
    }

    pub fn cayley(d: u32) -> Result<CayleyConfig, HaasError> {
        let [s1, s2] = Self::supports(d);
        Ok(cayley_embed(&[SupportConfig::new(2, s1)?, SupportConfig::new(2, s2)?])?)
    }

    /// Coefficients in Cayley order: `(1, a, -1, 1, b, -1)`.
    pub fn coefficients(&self) -> Vec<Rational> {
        vec![int(1), self.a.clone(), int(-1), int(1), self.b.clone(), int(-1)]
    }

    /// The reduced discriminant curve of the family, with the `x^(2d)` point
    /// as origin.
    pub fn curve(d: u32) -> Result<ReducedCurve, HaasError> {
        let c = Self::cayley(d)?.embedded.with_origin(0)?;
        Ok(curve_for(&c, Some(&ODD_CELL))?)
    }

    /// Signs relating reduced coordinates to `(a, b)`. The scaled exponents
    /// of the `a` and `b` columns must be the identity; the sign of each
    /// reduced coordinate then comes from the two `-1` coefficients, whose
    /// exponents share an odd denominator.
    pub fn chamber_signs(curve: &ReducedCurve) -> Result<[i8; 2], HaasError> {
        let (den, rows) = integer_exponents(curve);
        let zero = BigInt::zero();
        let identity = rows[0][1] == den && rows[0][4] == zero && rows[1][1] == zero && rows[1][4] == den;
        if !identity || den.is_even() {
            return Err(HaasError::DegenerateInput(format!(
                "reduced coordinates are not (a, b) up to sign (denominator {den})"
            )));
        }
        Ok([0, 1].map(|j| if (&rows[j][2] + &rows[j][5]).is_odd() { -1 } else { 1 }))
    }

    /// Chamber atlas of the family in `(a, b)` coordinates.
    pub fn atlas(d: u32) -> Result<ChamberAtlas, HaasError> {
        let curve = Self::curve(d)?;
        let chamber_signs = Self::chamber_signs(&curve)?;
        let critical = CriticalSet::compute(&curve, &NodeOptions::default())?;
        Ok(build_atlas(&curve, critical, &AtlasOptions { chamber_signs })?)
    }

    /// Bezout bound `4 d^2` on the number of isolated complex roots.
    pub fn bezout(&self) -> u32 {
        4 * self.d * self.d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::rat;

    #[test]
    fn equations_match_definition() {
        let h = HaasSystem::new(rat(44, 31), rat(44, 31), 3).unwrap();
        let (x, y) = (rat(1, 2), rat(2, 3));
        let v1 = x.pow(6) + rat(44, 31) * y.pow(3) - &y;
        let v2 = y.pow(6) + rat(44, 31) * x.pow(3) - &x;
        assert_eq!(h.h1.eval(&x, &y), v1);
        assert_eq!(h.h2.eval(&x, &y), v2);
        assert_eq!(h.sparse().eval(&[x, y]), vec![v1, v2]);
    }

    #[test]
    fn d_one_is_a_pair_of_quadratics() {
        let h = HaasSystem::new(int(2), int(3), 1).unwrap();
        assert_eq!(h.sparse().max_degree(), 2);
        assert_eq!(h.bezout(), 4);
    }

    #[test]
    fn cayley_support_is_six_points() {
        let c = HaasSystem::cayley(3).unwrap();
        let expect = [[6, 0, 0], [0, 3, 0], [0, 1, 0], [0, 6, 1], [3, 0, 1], [1, 0, 1]];
        assert_eq!(c.embedded.points, expect.map(|p| p.to_vec()).to_vec());
        // translating by the first point gives the printed matrix
        let printed = [[0, -6, -6, -6, -3, -5], [0, 3, 1, 6, 0, 0], [0, 0, 0, 1, 1, 1]];
        let shifted: Vec<Vec<i64>> = c.embedded.points.iter().map(|p| vec![p[0] - 6, p[1], p[2]]).collect();
        for (k, p) in shifted.iter().enumerate() {
            assert_eq!(*p, vec![printed[0][k], printed[1][k], printed[2][k]]);
        }
    }

    #[test]
    fn chamber_signs_from_exponents() {
        assert_eq!(HaasSystem::chamber_signs(&HaasSystem::curve(3).unwrap()).unwrap(), [-1, -1]);
        assert_eq!(HaasSystem::chamber_signs(&HaasSystem::curve(2).unwrap()).unwrap(), [1, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HaasSystem::new(int(0), int(1), 3).is_err());
        assert!(HaasSystem::new(int(1), int(1), 0).is_err());
    }
}
