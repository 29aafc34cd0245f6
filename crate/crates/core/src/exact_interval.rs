//! Intervals with rational endpoints, rounded outward to a fixed number of
//! significant bits, with certified `ln` and `exp`.

use num_traits::{One, Signed, Zero};

use crate::rational::{self, int, Rational};
use crate::CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl ExactInterval {
    pub fn point(x: Rational) -> Self {
        ExactInterval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty exact interval");
        ExactInterval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn intersect(&self, other: &ExactInterval) -> Option<ExactInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(ExactInterval { lo, hi })
    }

    pub fn round_out(&self, bits: u32) -> ExactInterval {
        ExactInterval { lo: rational::round_down(&self.lo, bits), hi: rational::round_up(&self.hi, bits) }
    }

    pub fn add(&self, o: &ExactInterval, bits: u32) -> ExactInterval {
        ExactInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }.round_out(bits)
    }

    pub fn sub(&self, o: &ExactInterval, bits: u32) -> ExactInterval {
        ExactInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }.round_out(bits)
    }

    pub fn neg(&self) -> ExactInterval {
        ExactInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &ExactInterval, bits: u32) -> ExactInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        ExactInterval { lo, hi }.round_out(bits)
    }

    pub fn scale(&self, c: &Rational, bits: u32) -> ExactInterval {
        self.mul(&ExactInterval::point(c.clone()), bits)
    }

    pub fn div(&self, o: &ExactInterval, bits: u32) -> Result<ExactInterval, CoreError> {
        if o.contains_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let inv = ExactInterval { lo: o.hi.recip(), hi: o.lo.recip() };
        Ok(self.mul(&inv, bits))
    }

    pub fn abs(&self) -> ExactInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            ExactInterval { lo: Rational::zero(), hi: self.lo.abs().max(self.hi.abs()) }
        }
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self, bits: u32) -> Result<ExactInterval, CoreError> {
        if !self.lo.is_positive() {
            return Err(CoreError::LogDomain);
        }
        let lo = ln_point(&self.lo, bits + 8)?.lo;
        let hi = ln_point(&self.hi, bits + 8)?.hi;
        Ok(ExactInterval { lo, hi }.round_out(bits))
    }

    pub fn exp(&self, bits: u32) -> ExactInterval {
        let lo = exp_point(&self.lo, bits + 8).lo;
        let hi = exp_point(&self.hi, bits + 8).hi;
        ExactInterval { lo, hi }.round_out(bits)
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (rational::f64_down(&self.lo), rational::f64_up(&self.hi))
    }
}

/// Enclosure of `2 * atanh(z) = sum 2 z^(2k+1)/(2k+1)` for `0 <= z <= 1/2`.
fn atanh2(z: &Rational, bits: u32) -> ExactInterval {
    let tol = rational::pow2(-(bits as i64) - 4);
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rational::zero();
    let mut k = 0u64;
    loop {
        let t = &term / Rational::from_integer((2 * k + 1).into());
        sum += &t;
        term = rational::round_down(&(&term * &z2), bits + 16);
        k += 1;
        // remaining tail is below term / (2k+1) / (1 - z^2)
        let tail = &(&term * rational::rat(4, 3)) / Rational::from_integer((2 * k + 1).into());
        if tail < tol {
            // truncated powers only ever lose mass, so the lower bound is safe;
            // tail also absorbs the per-term truncation below the same bound
            let slack = &tail + &tol * Rational::from_integer((k + 1).into());
            let lo = &sum * int(2);
            let hi = (&sum + &slack) * int(2);
            return ExactInterval { lo, hi };
        }
        sum = rational::round_down(&sum, bits + 24);
    }
}

fn ln2(bits: u32) -> ExactInterval {
    atanh2(&rational::rat(1, 3), bits)
}

/// Certified enclosure of `ln x` for rational `x > 0`.
pub fn ln_point(x: &Rational, bits: u32) -> Result<ExactInterval, CoreError> {
    if !x.is_positive() {
        return Err(CoreError::LogDomain);
    }
    if x.is_one() {
        return Ok(ExactInterval::point(Rational::zero()));
    }
    let w = bits + 16;
    // x = 2^e * y with y in [1, 2)
    let e = rational::ilog2(x);
    let y = x * rational::pow2(-e);
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let ly = atanh2(&z, w);
    let l2 = ln2(w);
    let e_int = ExactInterval::point(Rational::from_integer(e.into()));
    Ok(ly.add(&l2.mul(&e_int, w), w).round_out(bits))
}

/// Certified enclosure of `exp x` for rational `x`.
pub fn exp_point(x: &Rational, bits: u32) -> ExactInterval {
    if x.is_zero() {
        return ExactInterval::point(Rational::one());
    }
    let w = bits + 24;
    let l2 = ln2(w);
    // k = round(x / ln 2), r = x - k ln 2 with |r| < 0.36
    let k = rational::floor(&(x / rational::rat(693147, 1000000) + rational::rat(1, 2)));
    let kq = Rational::from_integer(k.clone());
    let r = ExactInterval::point(x.clone()).sub(&l2.scale(&kq, w), w);
    // Taylor series on an interval argument; |r| <= 1/2 so the tail after
    // the n-th term is bounded by 2 |r|^n / n!
    let rmag = r.lo.abs().max(r.hi.abs());
    let tol = rational::pow2(-(w as i64));
    let mut sum = ExactInterval::point(Rational::one());
    let mut term = ExactInterval::point(Rational::one());
    let mut bound = Rational::one();
    let mut n = 1u64;
    loop {
        term = term.mul(&r, w).scale(&Rational::new(1.into(), n.into()), w);
        sum = sum.add(&term, w);
        bound = rational::round_up(&(&bound * &rmag / Rational::from_integer(n.into())), 32);
        n += 1;
        let tail = rational::round_up(&(&bound * &rmag * int(2) / Rational::from_integer(n.into())), 32);
        if tail < tol {
            sum = ExactInterval { lo: &sum.lo - &tail, hi: &sum.hi + &tail };
            break;
        }
    }
    let scale = rational::pow2(k.try_into().expect("exponent fits in i64"));
    ExactInterval { lo: &sum.lo * &scale, hi: &sum.hi * &scale }.round_out(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_f64, rat};

    fn contains_f64(iv: &ExactInterval, x: f64) -> bool {
        // x is within 4 ulps of the interval
        let lo = from_f64(x.next_down().next_down());
        let hi = from_f64(x.next_up().next_up());
        iv.lo <= hi && lo <= iv.hi
    }

    #[test]
    fn ln_matches_libm() {
        for &(n, d) in &[(2, 1), (3, 1), (1, 3), (35, 4), (1, 1000), (123456789, 1000)] {
            let x = rat(n, d);
            let iv = ln_point(&x, 128).unwrap();
            assert!(iv.width() < rational::pow2(-100), "ln width {n}/{d}");
            assert!(contains_f64(&iv, (n as f64 / d as f64).ln()), "ln {n}/{d}");
        }
    }

    #[test]
    fn exp_matches_libm() {
        for &(n, d) in &[(1, 1), (-1, 1), (1, 3), (50, 1), (-37, 2), (7, 1000)] {
            let x = rat(n, d);
            let iv = exp_point(&x, 128);
            assert!(contains_f64(&iv, (n as f64 / d as f64).exp()), "exp {n}/{d}");
            let rel = iv.width() / iv.lo.clone();
            assert!(rel < rational::pow2(-100));
        }
    }

    #[test]
    fn exp_of_ln_roundtrip() {
        let x = rat(16807, 2916);
        let l = ln_point(&x, 160).unwrap();
        let e = l.exp(150);
        assert!(e.contains(&x));
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(ln_point(&rat(0, 1), 64).is_err());
        assert!(ExactInterval::new(rat(-1, 1), rat(1, 1)).ln(64).is_err());
    }
}
