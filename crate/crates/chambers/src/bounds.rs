//! Closed-form counting bounds of the critical-point method.
//!
//! Every quantity involving `e^2` is returned as a rational enclosure, so a
//! floor is only reported when the enclosure does not straddle an integer.

use fewroots_core::exact_interval::exp_point;
use fewroots_core::rational::{floor, int, pow2, rat, to_decimal, to_f64};
use fewroots_core::{ExactInterval, Rational};
use num_bigint::BigInt;
use serde::Serialize;
use std::sync::OnceLock;

use crate::error::ChamberError;

const BITS: u32 = 128;

/// The cubic or quadratic term in the second factor of the diffeotopy bound.
/// Counting strips gives `n^2`; `Cube` is the looser `n^3` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Square,
    Cube,
}

impl Variant {
    fn term(self, n: u64) -> u64 {
        match self {
            Variant::Square => n * n,
            Variant::Cube => n * n * n,
        }
    }
}

/// A rational enclosure together with its decimal rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    #[serde(skip)]
    pub exact: ExactInterval,
    pub lo: String,
    pub hi: String,
    pub approx: f64,
    /// `floor` of the enclosed number, when both endpoints agree on it.
    pub floor: Option<String>,
}

impl Enclosure {
    fn new(exact: ExactInterval) -> Self {
        let fl = floor(&exact.lo);
        let fh = floor(&exact.hi);
        Enclosure {
            lo: to_decimal(&exact.lo, 12),
            hi: to_decimal(&exact.hi, 12),
            approx: to_f64(&exact.midpoint()),
            floor: (fl == fh).then(|| fl.to_string()),
            exact,
        }
    }

    pub fn floor_int(&self) -> Option<BigInt> {
        let f = floor(&self.exact.lo);
        (f == floor(&self.exact.hi)).then_some(f)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.exact.contains(x)
    }
}

fn e_squared() -> ExactInterval {
    static E2: OnceLock<ExactInterval> = OnceLock::new();
    E2.get_or_init(|| exp_point(&int(2), BITS)).clone()
}

/// `(e^2 + 3) / 2`.
fn half_e2_plus_3() -> ExactInterval {
    e_squared().add(&ExactInterval::point(int(3)), BITS).scale(&rat(1, 2), BITS)
}

fn q(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

fn check(n: u64) -> Result<(), ChamberError> {
    if n == 0 {
        Err(ChamberError::BadDimension)
    } else {
        Ok(())
    }
}

/// Number of nonnegative real roots of a univariate sheared binomial with
/// `n + 1` positive factors: at most `n + 1`.
pub fn shear_bound_univariate(n: u64) -> u64 {
    n + 1
}

/// `(e^2 + 3) 2^((k-4)(k+1)/2) n^k` for a `k x k` system with `n + k` factors.
pub fn shear_bound(n: u64, k: u32) -> Result<Enclosure, ChamberError> {
    check(n)?;
    if k == 0 {
        return Err(ChamberError::BadDimension);
    }
    let k = i64::from(k);
    let scale = pow2((k - 4) * (k + 1) / 2) * q(n).pow(k as i32);
    let v = e_squared().add(&ExactInterval::point(int(3)), BITS).scale(&scale, BITS);
    Ok(Enclosure::new(v))
}

/// Upper bounds on the four feature counts for `n + 3` points in dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureBounds {
    pub axis: u64,
    pub cusps: u64,
    pub vertical: u64,
    /// `(n+2)(n+4) [1 + (e^2+3)/2 (n+2)(n+4)]`.
    pub nodes: Enclosure,
}

pub fn feature_bounds(n: u64) -> Result<FeatureBounds, ChamberError> {
    check(n)?;
    let p = q((n + 2) * (n + 4));
    let nodes = half_e2_plus_3().scale(&p, BITS).add(&ExactInterval::point(int(1)), BITS).scale(&p, BITS);
    Ok(FeatureBounds { axis: n + 2, cusps: n + 3, vertical: n + 4, nodes: Enclosure::new(nodes) })
}

/// Bound on the number of vertical strips: `16 + 8n + n^2 + (e^2+3)/2 (n+2)^2 (n+4)^2`.
pub fn strip_bound(n: u64) -> Result<Enclosure, ChamberError> {
    check(n)?;
    Ok(Enclosure::new(strip_interval(n, Variant::Square)))
}

fn strip_interval(n: u64, variant: Variant) -> ExactInterval {
    let p = q((n + 2) * (n + 4));
    let fixed = q(16 + 8 * n + variant.term(n));
    half_e2_plus_3().scale(&(&p * &p), BITS).add(&ExactInterval::point(fixed), BITS)
}

/// Each strip holds at most `2 + (n+2)(n+4)` pieces.
pub fn pieces_per_strip(n: u64) -> u64 {
    2 + (n + 2) * (n + 4)
}

/// `(10 + 6n + n^2)(16 + 8n + X + (e^2+3)/2 (n+2)^2 (n+4)^2)`.
pub fn diffeotopy_bound(n: u64, variant: Variant) -> Result<Enclosure, ChamberError> {
    check(n)?;
    let v = strip_interval(n, variant).scale(&q(10 + 6 * n + n * n), BITS);
    Ok(Enclosure::new(v))
}

/// `(26/5)(n+4)^6`.
pub fn diffeotopy_cap(n: u64) -> Rational {
    rat(26, 5) * q(n + 4).pow(6)
}

/// The value printed for hexanomials in three variables.
pub const PRINTED_HEXANOMIAL_BOUND: u64 = 237_920;

/// Both variants at one `n`, and how the cubic one compares with a printed value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub square: Enclosure,
    pub cube: Enclosure,
    pub cap: String,
    pub shear_univariate: u64,
    pub features: FeatureBounds,
    pub strips: Enclosure,
    pub pieces_per_strip: u64,
    /// Set when the floor of the cubic variant differs from `expected`.
    pub discrepancy: Option<String>,
}

pub fn bound_report(n: u64, expected: Option<u64>) -> Result<BoundReport, ChamberError> {
    let square = diffeotopy_bound(n, Variant::Square)?;
    let cube = diffeotopy_bound(n, Variant::Cube)?;
    let discrepancy = expected.and_then(|e| {
        let want = BigInt::from(e);
        match cube.floor_int() {
            Some(f) if f == want => None,
            Some(f) => Some(format!(
                "floor of the n^3 variant is {f}, printed value is {e} (difference {}); \
                 exact value lies in [{}, {}]",
                &f - &want,
                cube.lo,
                cube.hi
            )),
            None => Some(format!("n^3 variant straddles an integer: [{}, {}], printed value is {e}", cube.lo, cube.hi)),
        }
    });
    Ok(BoundReport {
        n,
        cap: to_decimal(&diffeotopy_cap(n), 1),
        shear_univariate: shear_bound_univariate(n),
        features: feature_bounds(n)?,
        strips: strip_bound(n)?,
        pieces_per_strip: pieces_per_strip(n),
        square,
        cube,
        discrepancy,
    })
}
