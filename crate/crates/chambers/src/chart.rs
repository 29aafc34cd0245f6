//! Breakpoints of the reduced curve and per-cell homogeneous charts.
//!
//! Forms with the same projective root are merged into one group carrying the
//! summed exponent column, so every group below has a distinct root and a
//! nonzero column. The cells are the open arcs of the projective line between
//! consecutive roots. Cell `k` is swept by `(1 - t) P + t Q`, `t in (0, 1)`,
//! where `P` and `Q` are homogeneous representatives of its two ends; every
//! chart runs in the same cyclic direction.

use fewroots_core::rational::{sign, to_f64};
use fewroots_core::{Interval, Rational, UniPoly};
use fewroots_toric::{LinearForm, ProjectiveParam, ReducedCurve};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::ChamberError;
use crate::special::{atanh_ratio, atanh_ratio_prime};

/// Merged forms sharing one projective root.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoint {
    pub root: ProjectiveParam,
    /// Representative form; every member is a constant multiple of it.
    pub form: LinearForm,
    pub members: Vec<usize>,
    /// Summed exponent column `(e_1, e_2)`.
    pub exps: [Rational; 2],
}

impl Breakpoint {
    pub fn exps_f64(&self) -> [f64; 2] {
        [to_f64(&self.exps[0]), to_f64(&self.exps[1])]
    }

    /// Direction in log coordinates along which both branches at this
    /// breakpoint leave: `L ~ e log|lambda - r|`, so the ray is `-e`.
    pub fn direction(&self) -> [f64; 2] {
        let e = self.exps_f64();
        [-e[0], -e[1]]
    }
}

/// Homogeneous value of a form at `v = (v1, v2)`.
fn eval_hom(f: &LinearForm, v: &[Rational; 2]) -> Rational {
    &f.slope * &v[0] + &f.constant * &v[1]
}

fn hom_rep(p: &ProjectiveParam) -> [Rational; 2] {
    match p {
        ProjectiveParam::Finite(r) => [r.clone(), Rational::one()],
        ProjectiveParam::Infinity => [Rational::one(), Rational::zero()],
    }
}

/// One breakpoint group restricted to a cell chart: `A + t (B - A)`.
#[derive(Debug, Clone)]
pub struct ChartForm {
    pub a: Rational,
    pub b: Rational,
    ai: Interval,
    di: Interval,
    ln_abs_a: Interval,
    ln_abs_b: Interval,
    /// Chart root `-A / (B - A)`, when the form is not constant in `t`.
    rho: Option<Interval>,
    /// Sign on the open cell.
    pub sign: i8,
}

impl ChartForm {
    fn new(a: Rational, b: Rational) -> Self {
        let d = &b - &a;
        let ln_or_nan = |x: &Rational| {
            if x.is_zero() {
                Interval::ENTIRE
            } else {
                Interval::from_rational(&x.abs()).ln()
            }
        };
        let rho = (!d.is_zero()).then(|| Interval::from_rational(&(-&a / &d)));
        let sign = if a.is_zero() { sign(&b) } else { sign(&a) };
        ChartForm {
            ai: Interval::from_rational(&a),
            di: Interval::from_rational(&d),
            ln_abs_a: ln_or_nan(&a),
            ln_abs_b: ln_or_nan(&b),
            rho,
            sign,
            a,
            b,
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &self.a + t * (&self.b - &self.a)
    }

    fn linear(&self) -> UniPoly {
        UniPoly::linear(&self.b - &self.a, self.a.clone())
    }
}

/// Coefficients `k_g = c . e_g` of a fixed linear combination `c` of the two
/// log-coordinates, precomputed per group; exact zeros are recorded as `None`.
#[derive(Debug, Clone)]
pub struct Combo {
    pub c: [Rational; 2],
    k: Vec<Option<Interval>>,
    offset: Interval,
}

impl Combo {
    pub fn coefficient(&self, g: usize) -> Option<Interval> {
        self.k[g]
    }
}

/// The curve prepared for chart evaluation.
#[derive(Debug, Clone)]
pub struct ChartedCurve {
    pub breakpoints: Vec<Breakpoint>,
    pub cells: Vec<Cell>,
    /// `sum_i b_ji ln|kappa_i|` for the member scalings and dropped groups.
    pub log_offset: [Interval; 2],
    pub sign_offset: [i8; 2],
}

/// One open cell with its chart.
#[derive(Debug, Clone)]
pub struct Cell {
    pub index: usize,
    /// Breakpoint at `t = 0` and at `t = 1`.
    pub start: usize,
    pub end: usize,
    pub p: [Rational; 2],
    pub q: [Rational; 2],
    /// Indexed like `ChartedCurve::breakpoints`.
    pub forms: Vec<ChartForm>,
    /// Sign of `(psi_1, psi_2)` on the cell.
    pub quadrant: [i8; 2],
    exps: Vec<[Rational; 2]>,
    log_offset: [Interval; 2],
}

fn sanitize(lo: f64, hi: f64) -> Interval {
    let lo = if lo.is_nan() { f64::NEG_INFINITY } else { lo };
    let hi = if hi.is_nan() { f64::INFINITY } else { hi };
    Interval::new(lo.min(hi), hi.max(lo))
}

/// Sums terms whose lower ends are never `+inf` and upper ends never `-inf`.
fn add_ext(acc: Interval, term: Interval) -> Interval {
    let s = acc + term;
    sanitize(s.lo(), s.hi())
}

/// `1 / d` for `d` known to be `> 0` on its interior (or `< 0` when `!positive`),
/// allowing the endpoint `0`.
fn recip_signed(d: Interval, positive: bool) -> Interval {
    if positive {
        let lo = d.lo().max(0.0);
        let hi = d.hi().max(0.0);
        let r_lo = if hi == 0.0 { f64::INFINITY } else { (1.0 / hi).next_down() };
        let r_hi = if lo == 0.0 { f64::INFINITY } else { (1.0 / lo).next_up() };
        Interval::new(r_lo, r_hi)
    } else {
        -recip_signed(-d, true)
    }
}

pub fn clamp_unit(t: Interval) -> Interval {
    Interval::new(t.lo().clamp(0.0, 1.0), t.hi().clamp(0.0, 1.0))
}

impl ChartedCurve {
    pub fn new(curve: &ReducedCurve) -> Result<Self, ChamberError> {
        let m = curve.m();
        let mut groups: Vec<Breakpoint> = Vec::new();
        let mut log_offset = [Interval::point(0.0), Interval::point(0.0)];
        let mut sign_offset = [1i8, 1i8];
        for i in 0..m {
            let f = &curve.forms.forms[i];
            let root = f.root().ok_or(ChamberError::DegenerateForm(i))?;
            let g = match groups.iter().position(|g| g.root == root) {
                Some(g) => g,
                None => {
                    groups.push(Breakpoint {
                        root,
                        form: f.clone(),
                        members: Vec::new(),
                        exps: [Rational::zero(), Rational::zero()],
                    });
                    groups.len() - 1
                }
            };
            let rep = &groups[g].form;
            let kappa = if !rep.slope.is_zero() { &f.slope / &rep.slope } else { &f.constant / &rep.constant };
            for j in 0..2 {
                let b = curve.exponent(j, i);
                if b.is_zero() {
                    continue;
                }
                if kappa != Rational::one() {
                    let ln_k = Interval::from_rational(&kappa.abs()).ln();
                    log_offset[j] = log_offset[j] + Interval::from_rational(b) * ln_k;
                }
                if kappa.is_negative() && b.numer().is_odd() {
                    sign_offset[j] = -sign_offset[j];
                }
            }
            let gr = &mut groups[g];
            gr.members.push(i);
            gr.exps[0] += curve.exponent(0, i);
            gr.exps[1] += curve.exponent(1, i);
        }
        let mut breakpoints: Vec<Breakpoint> =
            groups.into_iter().filter(|g| !(g.exps[0].is_zero() && g.exps[1].is_zero())).collect();
        breakpoints.sort_by(|a, b| a.root.cmp(&b.root));
        let k = breakpoints.len();
        if k < 2 {
            return Err(ChamberError::Degenerate(format!("{k} breakpoint(s); the curve is not a curve")));
        }
        let reps: Vec<[Rational; 2]> = breakpoints.iter().map(|b| hom_rep(&b.root)).collect();
        let mut cells = Vec::with_capacity(k);
        for c in 0..k {
            let p = reps[c].clone();
            let q = if c + 1 < k { reps[c + 1].clone() } else { [-&reps[0][0], -&reps[0][1]] };
            let forms: Vec<ChartForm> =
                breakpoints.iter().map(|b| ChartForm::new(eval_hom(&b.form, &p), eval_hom(&b.form, &q))).collect();
            let mut cell = Cell {
                index: c,
                start: c,
                end: (c + 1) % k,
                p,
                q,
                forms,
                quadrant: [1, 1],
                exps: breakpoints.iter().map(|b| b.exps.clone()).collect(),
                log_offset,
            };
            cell.quadrant = [0, 1].map(|j| {
                let mut s = sign_offset[j];
                for (g, f) in cell.forms.iter().enumerate() {
                    if cell.exps[g][j].numer().is_odd() {
                        s *= f.sign;
                    }
                }
                s
            });
            cells.push(cell);
        }
        Ok(ChartedCurve { breakpoints, cells, log_offset, sign_offset })
    }

    pub fn combo(&self, c: [Rational; 2]) -> Combo {
        let k = self
            .breakpoints
            .iter()
            .map(|b| {
                let v = &c[0] * &b.exps[0] + &c[1] * &b.exps[1];
                (!v.is_zero()).then(|| Interval::from_rational(&v))
            })
            .collect();
        let offset =
            Interval::from_rational(&c[0]) * self.log_offset[0] + Interval::from_rational(&c[1]) * self.log_offset[1];
        Combo { c, k, offset }
    }

    /// The coordinate combination `e_j`.
    pub fn axis(&self, j: usize) -> Combo {
        let mut c = [Rational::zero(), Rational::zero()];
        c[j] = Rational::one();
        self.combo(c)
    }

    /// A combination killing the singular term at breakpoint `r`.
    pub fn perp(&self, r: usize) -> Combo {
        let e = &self.breakpoints[r].exps;
        self.combo([e[1].clone(), -&e[0]])
    }
}

impl Cell {
    /// Homogeneous chart point at `t`.
    pub fn point(&self, t: &Rational) -> [Rational; 2] {
        let s = Rational::one() - t;
        [&s * &self.p[0] + t * &self.q[0], &s * &self.p[1] + t * &self.q[1]]
    }

    /// Affine parameter `lambda` at `t` (`inf` at the point at infinity).
    pub fn lambda_f64(&self, t: f64) -> f64 {
        let p = [to_f64(&self.p[0]), to_f64(&self.p[1])];
        let q = [to_f64(&self.q[0]), to_f64(&self.q[1])];
        let v0 = (1.0 - t) * p[0] + t * q[0];
        let v1 = (1.0 - t) * p[1] + t * q[1];
        v0 / v1
    }

    pub fn lambda(&self, t: &Rational) -> ProjectiveParam {
        let v = self.point(t);
        if v[1].is_zero() {
            ProjectiveParam::Infinity
        } else {
            ProjectiveParam::Finite(&v[0] / &v[1])
        }
    }

    /// The same cell traversed backwards, `t -> 1 - t`.
    pub fn mirror(&self) -> Cell {
        let mut m = self.clone();
        std::mem::swap(&mut m.p, &mut m.q);
        std::mem::swap(&mut m.start, &mut m.end);
        m.forms = self.forms.iter().map(|f| ChartForm::new(f.b.clone(), f.a.clone())).collect();
        m
    }

    /// `combo . (log|psi_1|, log|psi_2|)` over `t in T` (clamped to `[0, 1]`).
    pub fn log_value(&self, combo: &Combo, t: Interval) -> Interval {
        let t = clamp_unit(t);
        let mut acc = combo.offset;
        for (g, f) in self.forms.iter().enumerate() {
            let Some(k) = combo.k[g] else { continue };
            let term = if g == self.start {
                f.ln_abs_b + t.ln()
            } else if g == self.end {
                f.ln_abs_a + (Interval::point(1.0) - t).ln()
            } else {
                (f.ai + t * f.di).abs().ln()
            };
            acc = add_ext(acc, k * term);
        }
        acc
    }

    /// As [`Cell::log_value`] with `t = exp(tau)`, for `t <= 1/2`; keeps full
    /// relative precision arbitrarily close to the start of the chart.
    pub fn log_value_tau(&self, combo: &Combo, tau: Interval) -> Interval {
        let t = tau.exp();
        let mut acc = combo.offset;
        for (g, f) in self.forms.iter().enumerate() {
            let Some(k) = combo.k[g] else { continue };
            let term = if g == self.start {
                f.ln_abs_b + tau
            } else if g == self.end {
                f.ln_abs_a + (Interval::point(1.0) - t).ln()
            } else {
                (f.ai + t * f.di).abs().ln()
            };
            acc = add_ext(acc, k * term);
        }
        acc
    }

    /// `d/dt` of the combination over `T`.
    pub fn dlog(&self, combo: &Combo, t: Interval) -> Interval {
        let t = clamp_unit(t);
        let mut acc = Interval::point(0.0);
        for (g, f) in self.forms.iter().enumerate() {
            let Some(k) = combo.k[g] else { continue };
            let term = if g == self.start {
                recip_signed(t, true)
            } else if g == self.end {
                -recip_signed(Interval::point(1.0) - t, true)
            } else {
                f.di / (f.ai + t * f.di)
            };
            acc = add_ext(acc, k * term);
        }
        acc
    }

    /// Divided difference `(F(s + h) - F(s - h)) / (2h)` of the combination,
    /// written in `(s, w = h^2)`; `w = 0` gives the derivative at `s`.
    pub fn divided_difference(&self, combo: &Combo, s: Interval, w: Interval) -> Interval {
        let mut acc = Interval::point(0.0);
        for (g, f) in self.forms.iter().enumerate() {
            let Some(k) = combo.k[g] else { continue };
            let Some(rho) = f.rho else { continue };
            let (inv, z) = self.inv_and_z(g, rho, s, w);
            let fz = atanh_ratio(z);
            acc = add_ext(acc, k * (inv * fz));
        }
        acc
    }

    /// Partial derivatives of [`Cell::divided_difference`] in `s` and `w`.
    pub fn divided_difference_grad(&self, combo: &Combo, s: Interval, w: Interval) -> (Interval, Interval) {
        let mut ds = Interval::point(0.0);
        let mut dw = Interval::point(0.0);
        for (g, f) in self.forms.iter().enumerate() {
            let Some(k) = combo.k[g] else { continue };
            let Some(rho) = f.rho else { continue };
            let (inv, z) = self.inv_and_z(g, rho, s, w);
            let fz = atanh_ratio(z);
            let fp = atanh_ratio_prime(z);
            let inv2 = inv.sqr();
            ds = add_ext(ds, -(k * inv2 * (fz + Interval::point(2.0) * z * fp)));
            dw = add_ext(dw, k * inv2 * inv * fp);
        }
        (ds, dw)
    }

    fn inv_and_z(&self, g: usize, rho: Interval, s: Interval, w: Interval) -> (Interval, Interval) {
        // the chart root lies outside (0, 1): at or below 0, or at or above 1
        let below = g == self.start || rho.hi() <= 0.0;
        let d = if g == self.start {
            s
        } else if g == self.end {
            s - Interval::point(1.0)
        } else {
            s - rho
        };
        let d = if below {
            Interval::new(d.lo().max(0.0), d.hi().max(0.0))
        } else {
            Interval::new(d.lo().min(0.0), d.hi().min(0.0))
        };
        let inv = recip_signed(d, below);
        let z = w.max(&Interval::point(0.0)) * inv.sqr();
        let z = Interval::new(z.lo().clamp(0.0, 1.0), z.hi().clamp(0.0, 1.0));
        (inv, z)
    }

    /// Numerator of `d/dt log|psi_j|` in the chart, cleared by the product of
    /// the chart forms that occur in row `j` and vary with `t`.
    pub fn log_derivative_numerator(&self, j: usize) -> UniPoly {
        let support: Vec<usize> = (0..self.forms.len())
            .filter(|&g| !self.exps[g][j].is_zero() && self.forms[g].a != self.forms[g].b)
            .collect();
        let mut total = UniPoly::zero();
        for &g in &support {
            let f = &self.forms[g];
            let mut term = UniPoly::constant(&self.exps[g][j] * (&f.b - &f.a));
            for &h in &support {
                if h != g {
                    term = &term * &self.forms[h].linear();
                }
            }
            total = &total + &term;
        }
        if total.is_zero() {
            total
        } else {
            total.primitive_part()
        }
    }

    pub fn exps(&self, g: usize) -> &[Rational; 2] {
        &self.exps[g]
    }

    /// Interior sign of `psi` as an `f64` multiplier.
    pub fn quadrant_f64(&self) -> [f64; 2] {
        [f64::from(self.quadrant[0]), f64::from(self.quadrant[1])]
    }

    pub fn log_offset(&self) -> [Interval; 2] {
        self.log_offset
    }
}

/// Kind of limit of one coordinate at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    Zero,
    Infinite,
    /// `|psi_j|` tends to a finite nonzero value, enclosed by `[lo, hi]`.
    Finite {
        lo: f64,
        hi: f64,
    },
}
