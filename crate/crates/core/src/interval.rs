//! Closed intervals of doubles with outward rounding.
//!
//! Arithmetic is performed in round-to-nearest and each bound is pushed one
//! ulp outward, which dominates the half-ulp rounding error. `ln` and `exp`
//! are widened by two ulps on top of the platform libm result.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::rational::{self, Rational};

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

/// Product treating `0 * inf` as `0`.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Tightest double interval containing `r`.
    pub fn from_rational(r: &Rational) -> Self {
        Interval { lo: rational::f64_down(r), hi: rational::f64_up(r) }
    }

    pub fn from_rationals(lo: &Rational, hi: &Rational) -> Self {
        Interval { lo: rational::f64_down(lo), hi: rational::f64_up(hi) }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            0.0
        } else if self.lo == f64::NEG_INFINITY {
            f64::MIN
        } else if self.hi == f64::INFINITY {
            f64::MAX
        } else {
            let m = 0.5 * self.lo + 0.5 * self.hi;
            m.clamp(self.lo, self.hi)
        }
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `self` lies in the interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval { lo: down(a.lo * a.lo).max(0.0), hi: up(a.hi * a.hi) }
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut out = Interval::point(1.0);
        for _ in 0..n {
            out = out * *self;
        }
        if n.is_multiple_of(2) && self.contains_zero() {
            out = Interval { lo: out.lo.max(0.0), hi: out.hi };
        }
        out
    }

    pub fn sqrt(&self) -> Interval {
        let lo = self.lo.max(0.0);
        Interval { lo: down(lo.sqrt()).max(0.0), hi: up(self.hi.max(0.0).sqrt()) }
    }

    /// Natural log of the (nonnegative part of the) interval; `ln 0 = -inf`.
    pub fn ln(&self) -> Interval {
        let lo = self.lo.max(0.0);
        let l = if lo == 0.0 { f64::NEG_INFINITY } else { down(down(lo.ln())) };
        let h = if self.hi <= 0.0 { f64::NEG_INFINITY } else { up(up(self.hi.ln())) };
        Interval { lo: l, hi: h }
    }

    pub fn exp(&self) -> Interval {
        Interval { lo: down(down(self.lo.exp())).max(0.0), hi: up(up(self.hi.exp())) }
    }

    pub fn recip(&self) -> Option<Interval> {
        Interval::point(1.0).checked_div(self)
    }

    pub fn checked_div(&self, d: &Interval) -> Option<Interval> {
        if d.contains_zero() {
            return None;
        }
        let c = [self.lo / d.lo, self.lo / d.hi, self.hi / d.lo, self.hi / d.hi];
        let c = c.map(|v| if v.is_nan() { 0.0 } else { v });
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Interval { lo: down(lo), hi: up(hi) })
    }

    pub fn scale(&self, c: f64) -> Interval {
        *self * Interval::point(c)
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo + rhs.lo), hi: up(self.hi + rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo - rhs.hi), hi: up(self.hi - rhs.lo) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [mul0(self.lo, rhs.lo), mul0(self.lo, rhs.hi), mul0(self.hi, rhs.lo), mul0(self.hi, rhs.hi)];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Falls back to the entire line when the divisor contains zero.
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(&rhs).unwrap_or(Interval::ENTIRE)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outward_sums() {
        let a = Interval::point(0.1);
        let s = a + a + a;
        assert!(s.contains(0.30000000000000004) && s.lo() < 0.3 + 1e-16);
        assert!(rational::from_f64(s.lo()) < crate::rational::rat(3, 10));
    }

    #[test]
    fn zero_times_infinity() {
        let z = Interval::point(0.0);
        let big = Interval::new(1.0, f64::INFINITY);
        let p = z * big;
        assert!(p.contains(0.0) && p.width() < 1e-300);
    }

    #[test]
    fn log_exp_enclose() {
        let x = Interval::new(2.0, 3.0);
        let l = x.ln();
        assert!(l.lo() < 2f64.ln() && l.hi() > 3f64.ln());
        let e = l.exp();
        assert!(e.lo() < 2.0 && e.hi() > 3.0);
        let z = Interval::new(0.0, 1.0).ln();
        assert_eq!(z.lo(), f64::NEG_INFINITY);
    }

    #[test]
    fn division_by_zero_interval() {
        assert!(Interval::point(1.0).checked_div(&Interval::new(-1.0, 1.0)).is_none());
        let q = Interval::point(1.0) / Interval::new(2.0, 4.0);
        assert!(q.contains(0.25) && q.contains(0.5));
    }
}
