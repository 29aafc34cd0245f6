use num_traits::Signed;

use crate::rational::{self, Rational};
use crate::{CoreError, UniPoly};

/// Sturm sequence of the squarefree part of a polynomial. Every member is
/// scaled by a positive constant to coprime integer coefficients.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<UniPoly>,
}

/// An interval `[lo, hi]` holding exactly one real root of `poly`
/// (squarefree). Either `lo == hi` is the root itself, or `poly` has opposite
/// nonzero signs at the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub poly: UniPoly,
    pub sign_lo: i8,
    pub sign_hi: i8,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<Self, CoreError> {
        if p.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let p0 = p.squarefree_part().primitive_part();
        let mut seq = vec![p0.clone()];
        if p0.degree() == Some(0) {
            return Ok(SturmSequence { seq });
        }
        let mut a = p0;
        let mut b = a.derivative().primitive_part();
        while !b.is_zero() {
            seq.push(b.clone());
            let r = (-&a.rem(&b)).primitive_part();
            a = b;
            b = r;
        }
        Ok(SturmSequence { seq })
    }

    /// The squarefree polynomial the sequence was built from.
    pub fn base(&self) -> &UniPoly {
        &self.seq[0]
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        count_changes(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        count_changes(self.seq.iter().map(|p| {
            let s = rational::sign(&p.lead());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if positive || !odd {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`, `a < b`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Isolates the distinct real roots in the open interval `(lo, hi)`, or in
    /// the Cauchy box when no range is given. Sorted and pairwise disjoint.
    pub fn isolate(&self, range: Option<(&Rational, &Rational)>) -> Vec<IsolatingInterval> {
        let p = self.base().clone();
        if p.degree() == Some(0) {
            return Vec::new();
        }
        let (lo, hi) = match range {
            Some((a, b)) => (a.clone(), b.clone()),
            None => {
                let bnd = p.cauchy_bound();
                (-bnd.clone(), bnd)
            }
        };
        let mut out = Vec::new();
        // open endpoints: nudge off roots that happen to sit on the boundary
        let lo = self.nudge(&lo, &hi, true);
        let hi = self.nudge(&hi, &lo, false);
        if lo >= hi {
            return out;
        }
        self.isolate_rec(lo, hi, &mut out);
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Points with `p != 0` strictly inside `(a, b)` close to `a`, used for open endpoints.
    fn nudge(&self, a: &Rational, b: &Rational, towards_up: bool) -> Rational {
        let p = self.base();
        if p.sign_at(a) != 0 {
            return a.clone();
        }
        let mut step = (b - a).abs() / Rational::from_integer(4.into());
        loop {
            let x = if towards_up { a + &step } else { a - &step };
            if p.sign_at(&x) != 0 && self.count_in_open(a, &x, towards_up) == 0 {
                return x;
            }
            step /= Rational::from_integer(2.into());
        }
    }

    fn count_in_open(&self, a: &Rational, x: &Rational, up: bool) -> usize {
        // roots strictly between a and x (a itself is a root)
        let (l, r) = if up { (a, x) } else { (x, a) };
        let n = self.count_in(l, r);
        if up {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    fn isolate_rec(&self, lo: Rational, hi: Rational, out: &mut Vec<IsolatingInterval>) {
        let mut stack = vec![(lo, hi)];
        let p = self.base();
        let two = Rational::from_integer(2.into());
        while let Some((a, b)) = stack.pop() {
            let n = self.count_in(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(IsolatingInterval {
                    sign_lo: p.sign_at(&a),
                    sign_hi: p.sign_at(&b),
                    lo: a,
                    hi: b,
                    poly: p.clone(),
                });
                continue;
            }
            let m = (&a + &b) / &two;
            if p.sign_at(&m) == 0 {
                let mut d = (&b - &a) / Rational::from_integer(8.into());
                loop {
                    let l = &m - &d;
                    let r = &m + &d;
                    if p.sign_at(&l) != 0 && p.sign_at(&r) != 0 && self.count_in(&l, &r) == 1 {
                        out.push(IsolatingInterval {
                            lo: m.clone(),
                            hi: m.clone(),
                            poly: p.clone(),
                            sign_lo: 0,
                            sign_hi: 0,
                        });
                        stack.push((a.clone(), l));
                        stack.push((r, b.clone()));
                        break;
                    }
                    d /= &two;
                }
            } else {
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Isolating intervals for all distinct real roots of `p`.
pub fn isolate_real_roots(p: &UniPoly) -> Result<Vec<IsolatingInterval>, CoreError> {
    Ok(SturmSequence::new(p)?.isolate(None))
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Bisects until the width is at most `eps` (or the root is hit exactly).
    pub fn refine(&mut self, eps: &Rational) {
        let two = Rational::from_integer(2.into());
        while !self.is_exact() && self.width() > *eps {
            let m = (&self.lo + &self.hi) / &two;
            let s = self.poly.sign_at(&m);
            if s == 0 {
                self.lo = m.clone();
                self.hi = m;
                self.sign_lo = 0;
                self.sign_hi = 0;
            } else if s == self.sign_lo {
                self.lo = m;
            } else {
                self.hi = m;
            }
        }
    }

    /// Bisects toward a width relative to magnitude: stops once the width is
    /// below `2^-bits` times the larger endpoint magnitude (or `2^-bits`).
    pub fn refine_bits(&mut self, bits: u32) {
        let scale = self.lo.abs().max(self.hi.abs()).max(Rational::from_integer(1.into()));
        let eps = scale * rational::pow2(-(bits as i64));
        self.refine(&eps);
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Outward `f64` bounds.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (rational::f64_down(&self.lo), rational::f64_up(&self.hi))
    }

    /// A nonzero-width enclosure check: `x` is the root iff `p(x) = 0`.
    pub fn approx(&self) -> f64 {
        rational::to_f64(&self.midpoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sqrt_two() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let mut lo = roots[0].clone();
        lo.refine(&rat(1, 2));
        assert!(lo.lo >= int(-2) && lo.hi <= int(-1));
        let mut r = roots[1].clone();
        r.refine(&rat(1, 1_000_000));
        assert!(r.lo < rat(1414214, 1_000_000) && r.hi > rat(1414213, 1_000_000));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(isolate_real_roots(&UniPoly::zero()).unwrap_err(), CoreError::ZeroPolynomial);
    }

    #[test]
    fn exact_rational_roots_and_multiplicity() {
        // x^2 (x - 1)^3 (2x + 1)
        let x = UniPoly::x();
        let a = UniPoly::from_ints(&[-1, 1]);
        let b = UniPoly::from_ints(&[1, 2]);
        let p = &(&(&x * &x) * &a.pow(3)) * &b;
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        let s = SturmSequence::new(&p).unwrap();
        assert_eq!(s.count_real(), 3);
        for r in &roots {
            assert!(r.is_exact() || r.sign_lo * r.sign_hi < 0);
        }
    }

    #[test]
    fn range_restriction_is_open() {
        let p = UniPoly::from_ints(&[0, -1, 0, 1]); // roots -1, 0, 1
        let s = SturmSequence::new(&p).unwrap();
        let r = s.isolate(Some((&int(0), &int(1))));
        assert!(r.is_empty());
        let r = s.isolate(Some((&rat(-1, 2), &int(2))));
        assert_eq!(r.len(), 2);
    }
}
