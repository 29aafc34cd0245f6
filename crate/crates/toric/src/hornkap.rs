use std::fmt;

use fewroots_core::exact_interval::ln_point;
use fewroots_core::matrix::integer_kernel;
use fewroots_core::rational::{sign, to_f64};
use fewroots_core::{CoreError, ExactInterval, IntMatrix, RatMatrix, Rational, UniPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cell::OddCell;
use crate::error::ToricError;
use crate::supports::SupportConfig;

/// A point of the real projective line. `Infinity` is `[1 : 0]`; signs there
/// are read off the representative `(1, 0)`, i.e. as `lambda -> +inf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjectiveParam {
    Finite(Rational),
    Infinity,
}

impl ProjectiveParam {
    pub fn to_f64(&self) -> f64 {
        match self {
            ProjectiveParam::Finite(r) => to_f64(r),
            ProjectiveParam::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for ProjectiveParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveParam::Finite(r) => write!(f, "{r}"),
            ProjectiveParam::Infinity => write!(f, "inf"),
        }
    }
}

/// `slope * lambda + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub slope: Rational,
    pub constant: Rational,
}

impl LinearForm {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.constant
    }

    /// Value at the homogeneous representative of `p`.
    pub fn eval_projective(&self, p: &ProjectiveParam) -> Rational {
        match p {
            ProjectiveParam::Finite(x) => self.eval(x),
            ProjectiveParam::Infinity => self.slope.clone(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        to_f64(&self.slope) * x + to_f64(&self.constant)
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// The unique root on the projective line; a nonzero constant form
    /// vanishes at infinity after homogenization.
    pub fn root(&self) -> Option<ProjectiveParam> {
        if !self.slope.is_zero() {
            Some(ProjectiveParam::Finite(-&self.constant / &self.slope))
        } else if !self.constant.is_zero() {
            Some(ProjectiveParam::Infinity)
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> UniPoly {
        UniPoly::linear(self.slope.clone(), self.constant.clone())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope.is_zero(), self.constant.is_zero()) {
            (true, _) => write!(f, "{}", self.constant),
            (false, true) => write!(f, "{}*l", self.slope),
            (false, false) if self.constant.is_negative() => write!(f, "{}*l - {}", self.slope, -&self.constant),
            _ => write!(f, "{}*l + {}", self.slope, self.constant),
        }
    }
}

/// Linear forms `l_i(lambda) = u1_i * lambda + u2_i` built from two
/// nullspace vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormFamily {
    pub u1: Vec<BigInt>,
    pub u2: Vec<BigInt>,
    pub forms: Vec<LinearForm>,
}

impl LinearFormFamily {
    pub fn from_basis(u1: Vec<BigInt>, u2: Vec<BigInt>) -> Self {
        let forms = u1
            .iter()
            .zip(&u2)
            .map(|(a, b)| LinearForm { slope: Rational::from(a.clone()), constant: Rational::from(b.clone()) })
            .collect();
        LinearFormFamily { u1, u2, forms }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `G` with `(other.u1, other.u2)^T = G (self.u1, self.u2)^T`, if the two
    /// families span the same plane. The parameters are then related by the
    /// Moebius map that `G` induces.
    pub fn basis_change(&self, other: &LinearFormFamily) -> Option<RatMatrix> {
        let q = |v: &BigInt| Rational::from(v.clone());
        let m = self.len();
        let (i, j) = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .find(|&(i, j)| &self.u1[i] * &self.u2[j] - &self.u1[j] * &self.u2[i] != BigInt::zero())?;
        let base =
            RatMatrix::from_rows(&[vec![q(&self.u1[i]), q(&self.u1[j])], vec![q(&self.u2[i]), q(&self.u2[j])]]).ok()?;
        let target =
            RatMatrix::from_rows(&[vec![q(&other.u1[i]), q(&other.u1[j])], vec![q(&other.u2[i]), q(&other.u2[j])]])
                .ok()?;
        let g = target.mul(&base.inverse().ok()?).ok()?;
        for k in 0..m {
            let e1 = &g[(0, 0)] * q(&self.u1[k]) + &g[(0, 1)] * q(&self.u2[k]);
            let e2 = &g[(1, 0)] * q(&self.u1[k]) + &g[(1, 1)] * q(&self.u2[k]);
            if e1 != q(&other.u1[k]) || e2 != q(&other.u2[k]) {
                return None;
            }
        }
        Some(g)
    }
}

fn affine_matrix(config: &SupportConfig) -> IntMatrix {
    let mut rows = vec![vec![1i64; config.len()]];
    rows.extend((0..config.n).map(|r| config.points.iter().map(|p| p[r]).collect()));
    IntMatrix::from_rows(&rows).expect("rectangular")
}

fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Basis of `{u : A u = 0, sum u = 0}`: one primitive integer vector per
/// free column of the reduced row echelon form of `[1; A]`, in increasing
/// free-column order. Each vector is positive at its own free column.
pub fn nullspace_sum_zero(config: &SupportConfig) -> Result<Vec<Vec<BigInt>>, ToricError> {
    let m = affine_matrix(config).to_rational();
    let basis: Vec<Vec<BigInt>> = m.nullspace().iter().map(|v| clear_denominators(v)).collect();
    let expected = config.len().saturating_sub(config.n + 1);
    if basis.len() != expected {
        return Err(CoreError::DimensionError { expected, found: basis.len() }.into());
    }
    Ok(basis)
}

/// Saturated integer basis of the same kernel, i.e. a basis of the lattice
/// `ker [1; A]` intersected with `Z^m`.
pub fn saturated_nullspace(config: &SupportConfig) -> Vec<Vec<BigInt>> {
    integer_kernel(&affine_matrix(config))
}

/// Linear forms for a configuration with `m = n + 3`: `lambda` multiplies
/// the nullspace vector of the later free column.
pub fn parametrize(config: &SupportConfig) -> Result<LinearFormFamily, ToricError> {
    if config.len() != config.n + 3 {
        return Err(ToricError::WrongCodimension { m: config.len(), n: config.n });
    }
    let mut basis = nullspace_sum_zero(config)?;
    let u1 = basis.pop().expect("two vectors");
    let u2 = basis.pop().expect("two vectors");
    let fam = LinearFormFamily::from_basis(u1, u2);
    if let Some(i) = fam.forms.iter().position(|f| f.root().is_none()) {
        return Err(ToricError::DegenerateForm { index: i });
    }
    Ok(fam)
}

/// The reduced discriminant curve `lambda -> Psi(lambda)`, with
/// `psi_j = prod_i l_i^exponents[j][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCurve {
    pub cell: OddCell,
    pub exponents: RatMatrix,
    pub forms: LinearFormFamily,
}

/// Assembles the exponent matrix: `+1` on the column of the `j`-th point
/// outside the cell, minus the `j`-th column of `A_C^{-1} A_{C'}` on the cell
/// columns, and the balancing entry on the origin column.
pub fn reduced_curve(forms: LinearFormFamily, cell: OddCell) -> Result<ReducedCurve, ToricError> {
    let m = forms.len();
    let k = cell.complement.len();
    if k != 2 {
        return Err(ToricError::WrongCodimension { m, n: cell.indices.len() });
    }
    let mut b = RatMatrix::zeros(2, m);
    for j in 0..2 {
        b[(j, cell.complement[j])] = Rational::one();
        for (r, &c) in cell.indices.iter().enumerate() {
            b[(j, c)] = -cell.exponent_block[(r, j)].clone();
        }
        let s: Rational = (1..m).map(|i| b[(j, i)].clone()).sum();
        b[(j, 0)] = -s;
    }
    Ok(ReducedCurve { cell, exponents: b, forms })
}

/// A point `Psi(lambda)` with certified magnitude enclosures.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub lambda: ProjectiveParam,
    /// Signed enclosures of `psi_1`, `psi_2`.
    pub value: [ExactInterval; 2],
    pub signs: [i8; 2],
    pub sign_vector: Vec<i8>,
}

impl CurvePoint {
    pub fn approx(&self) -> [f64; 2] {
        [to_f64(&self.value[0].midpoint()), to_f64(&self.value[1].midpoint())]
    }
}

impl ReducedCurve {
    pub fn m(&self) -> usize {
        self.forms.len()
    }

    pub fn exponent(&self, j: usize, i: usize) -> &Rational {
        &self.exponents[(j, i)]
    }

    pub fn exponents_f64(&self) -> [Vec<f64>; 2] {
        [0, 1].map(|j| (0..self.m()).map(|i| to_f64(&self.exponents[(j, i)])).collect())
    }

    /// Sign of `psi_j` given the signs of the forms: the product of
    /// `sign(l_i)^numerator(b_ji)`, well defined because denominators are odd.
    pub fn sign_of(&self, j: usize, form_signs: &[i8]) -> i8 {
        let mut s = 1i8;
        for (i, &fs) in form_signs.iter().enumerate() {
            let b = &self.exponents[(j, i)];
            if b.numer().is_odd() {
                s *= fs;
            }
        }
        s
    }

    pub fn form_signs(&self, at: &ProjectiveParam) -> Vec<i8> {
        self.forms.forms.iter().map(|f| sign(&f.eval_projective(at))).collect()
    }

    pub fn form_signs_f64(&self, x: f64) -> Vec<i8> {
        self.forms.forms.iter().map(|f| f.eval_f64(x).signum() as i8).collect()
    }

    /// Floating-point `(log|psi_1|, log|psi_2|)` and signs; `None` at a pole.
    pub fn log_abs_psi_f64(&self, x: f64) -> Option<([f64; 2], [i8; 2])> {
        let vals: Vec<f64> = self.forms.forms.iter().map(|f| f.eval_f64(x)).collect();
        if vals.contains(&0.0) {
            return None;
        }
        let b = self.exponents_f64();
        let logs: Vec<f64> = vals.iter().map(|v| v.abs().ln()).collect();
        let signs: Vec<i8> = vals.iter().map(|v| v.signum() as i8).collect();
        let l = [0, 1].map(|j| b[j].iter().zip(&logs).map(|(e, l)| e * l).sum());
        Some((l, [self.sign_of(0, &signs), self.sign_of(1, &signs)]))
    }

    pub fn psi_f64(&self, x: f64) -> Option<[f64; 2]> {
        let (l, s) = self.log_abs_psi_f64(x)?;
        Some([f64::from(s[0]) * l[0].exp(), f64::from(s[1]) * l[1].exp()])
    }

    /// Enclosure of `Psi` over every `lambda` in `[lo, hi]`, which must not
    /// contain a root of any form with a nonzero exponent.
    pub fn psi_over(&self, lo: &Rational, hi: &Rational, bits: u32) -> Result<[ExactInterval; 2], ToricError> {
        let mut logs = Vec::with_capacity(self.m());
        let mut signs = Vec::with_capacity(self.m());
        for (i, f) in self.forms.forms.iter().enumerate() {
            let a = f.eval(lo);
            let b = f.eval(hi);
            let s = sign(&a);
            if s == 0 || s != sign(&b) {
                if (0..2).all(|j| self.exponents[(j, i)].is_zero()) {
                    logs.push(None);
                    signs.push(1);
                    continue;
                }
                return Err(ToricError::Pole { index: i });
            }
            let (a, b) = if s > 0 { (a, b) } else { (-a, -b) };
            let iv = if a <= b { ExactInterval::new(a, b) } else { ExactInterval::new(b, a) };
            logs.push(Some(iv.ln(bits)?));
            signs.push(s);
        }
        let mut out = Vec::with_capacity(2);
        for j in 0..2 {
            let mut acc = ExactInterval::point(Rational::zero());
            for (i, l) in logs.iter().enumerate() {
                if let Some(l) = l {
                    let e = &self.exponents[(j, i)];
                    if !e.is_zero() {
                        acc = acc.add(&l.scale(e, bits), bits);
                    }
                }
            }
            let mag = acc.exp(bits);
            out.push(if self.sign_of(j, &signs) > 0 { mag } else { mag.neg() });
        }
        let b = out.pop().expect("two");
        let a = out.pop().expect("two");
        Ok([a, b])
    }
}

fn point_logs(curve: &ReducedCurve, at: &ProjectiveParam, bits: u32) -> Result<CurvePoint, ToricError> {
    let vals: Vec<Rational> = curve.forms.forms.iter().map(|f| f.eval_projective(at)).collect();
    let sv: Vec<i8> = vals.iter().map(sign).collect();
    let mut value = Vec::with_capacity(2);
    for j in 0..2 {
        let mut acc = ExactInterval::point(Rational::zero());
        for (i, v) in vals.iter().enumerate() {
            let e = &curve.exponents[(j, i)];
            if e.is_zero() {
                continue;
            }
            if v.is_zero() {
                return Err(ToricError::Pole { index: i });
            }
            acc = acc.add(&ln_point(&v.abs(), bits)?.scale(e, bits), bits);
        }
        let mag = acc.exp(bits);
        value.push(if curve.sign_of(j, &sv) > 0 { mag } else { mag.neg() });
    }
    let v2 = value.pop().expect("two");
    let v1 = value.pop().expect("two");
    let signs = [curve.sign_of(0, &sv), curve.sign_of(1, &sv)];
    Ok(CurvePoint { lambda: at.clone(), value: [v1, v2], signs, sign_vector: sv })
}

/// Evaluates `Psi` at a rational or infinite parameter, doubling the working
/// precision until both enclosures are narrower than `eps`. Successive
/// enclosures are intersected, so the result lies inside every coarser one.
pub fn evaluate_psi(curve: &ReducedCurve, at: &ProjectiveParam, eps: &Rational) -> Result<CurvePoint, ToricError> {
    let mut bits = 64;
    let mut best = point_logs(curve, at, bits)?;
    while best.value.iter().any(|v| &v.width() >= eps) && bits < 1 << 14 {
        bits *= 2;
        let next = point_logs(curve, at, bits)?;
        best = refine_into(best, next);
    }
    Ok(best)
}

/// Evaluates at each precision in `schedule`, returning the nested chain of
/// enclosures.
pub fn evaluate_psi_schedule(
    curve: &ReducedCurve,
    at: &ProjectiveParam,
    schedule: &[u32],
) -> Result<Vec<CurvePoint>, ToricError> {
    let mut out: Vec<CurvePoint> = Vec::with_capacity(schedule.len());
    for &bits in schedule {
        let next = point_logs(curve, at, bits)?;
        let p = match out.last() {
            Some(prev) => refine_into(prev.clone(), next),
            None => next,
        };
        out.push(p);
    }
    Ok(out)
}

fn refine_into(prev: CurvePoint, next: CurvePoint) -> CurvePoint {
    let v = [0, 1].map(|j| prev.value[j].intersect(&next.value[j]).unwrap_or_else(|| next.value[j].clone()));
    CurvePoint { value: v, ..next }
}

/// Numerator of `sum_i b_ji l_i'/l_i`, cleared by the product of the forms
/// that occur in row `j` with a nonzero exponent and are not constant.
pub fn log_derivative_poly(curve: &ReducedCurve, j: usize) -> UniPoly {
    let support: Vec<usize> =
        (0..curve.m()).filter(|&i| !curve.exponents[(j, i)].is_zero() && !curve.forms.forms[i].is_constant()).collect();
    let mut total = UniPoly::zero();
    for &i in &support {
        let mut term = UniPoly::constant(&curve.exponents[(j, i)] * &curve.forms.forms[i].slope);
        for &k in &support {
            if k != i {
                term = &term * &curve.forms.forms[k].as_poly();
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

/// Exponents scaled to a common odd denominator, as integers.
pub fn integer_exponents(curve: &ReducedCurve) -> (BigInt, [Vec<BigInt>; 2]) {
    let d = (0..2)
        .flat_map(|j| (0..curve.m()).map(move |i| (j, i)))
        .fold(BigInt::one(), |acc, (j, i)| acc.lcm(curve.exponents[(j, i)].denom()));
    let rows = [0, 1]
        .map(|j| (0..curve.m()).map(|i| (&curve.exponents[(j, i)] * Rational::from(d.clone())).to_integer()).collect());
    (d, rows)
}

/// Convenience: normalize with the given origin, take the given (or first)
/// odd cell, and build the curve.
pub fn curve_for(config: &SupportConfig, cell: Option<&[usize]>) -> Result<ReducedCurve, ToricError> {
    let c = if config.normalized { config.clone() } else { config.normalize()? };
    let cell = match cell {
        Some(ix) => crate::cell::odd_cell(&c, ix)?,
        None => crate::cell::find_odd_cell(&c)?,
    };
    reduced_curve(parametrize(&c)?, cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::{int, rat};

    fn haas_curve() -> ReducedCurve {
        let c = SupportConfig::new(
            3,
            vec![vec![6, 0, 0], vec![0, 3, 0], vec![0, 1, 0], vec![0, 6, 1], vec![3, 0, 1], vec![1, 0, 1]],
        )
        .unwrap()
        .with_origin(0)
        .unwrap();
        curve_for(&c, Some(&[2, 3, 5])).unwrap()
    }

    #[test]
    fn haas_forms_match_the_known_family() {
        let c = haas_curve();
        let expect = [(-2, -2), (35, 11), (-33, -9), (-12, -4), (0, 4), (12, 0)];
        for (f, (a, b)) in c.forms.forms.iter().zip(expect) {
            assert_eq!(f.slope, int(a));
            assert_eq!(f.constant, int(b));
        }
    }

    #[test]
    fn haas_exponent_rows() {
        let c = haas_curve();
        let r1 = [-2, 35, -33, -12, 0, 12];
        let r2 = [-12, 0, 12, -2, 35, -33];
        for i in 0..6 {
            assert_eq!(c.exponents[(0, i)], rat(r1[i], 35));
            assert_eq!(c.exponents[(1, i)], rat(r2[i], 35));
        }
    }

    #[test]
    fn log_derivative_degrees() {
        let c = haas_curve();
        let p1 = log_derivative_poly(&c, 0);
        let p2 = log_derivative_poly(&c, 1);
        assert!(p1.degree().unwrap() <= 5);
        assert!(p2.degree().unwrap() <= 5);
        let g = p1.gcd(&p2);
        assert_eq!(g.degree(), Some(3));
    }

    #[test]
    fn sign_vector_constant_between_roots() {
        let c = haas_curve();
        let a = c.form_signs(&ProjectiveParam::Finite(rat(-13, 20)));
        let b = c.form_signs(&ProjectiveParam::Finite(rat(-9, 20)));
        assert_eq!(a, b);
    }

    #[test]
    fn pole_is_reported() {
        let c = haas_curve();
        let e = evaluate_psi(&c, &ProjectiveParam::Finite(int(-1)), &rat(1, 1000));
        assert_eq!(e.unwrap_err(), ToricError::Pole { index: 0 });
        // the constant form vanishes at infinity
        let e = evaluate_psi(&c, &ProjectiveParam::Infinity, &rat(1, 1000));
        assert_eq!(e.unwrap_err(), ToricError::Pole { index: 4 });
    }

    #[test]
    fn exact_and_float_agree() {
        let c = haas_curve();
        let x = rat(-1, 2);
        let p = evaluate_psi(&c, &ProjectiveParam::Finite(x), &rat(1, 1 << 40)).unwrap();
        let f = c.psi_f64(-0.5).unwrap();
        let a = p.approx();
        assert!((a[0] - f[0]).abs() < 1e-12 * f[0].abs());
        assert!((a[1] - f[1]).abs() < 1e-12 * f[1].abs());
        let over = c.psi_over(&rat(-51, 100), &rat(-49, 100), 64).unwrap();
        assert!(over[0].contains(&p.value[0].midpoint()));
    }

    #[test]
    fn schedule_is_nested() {
        let c = haas_curve();
        let chain = evaluate_psi_schedule(&c, &ProjectiveParam::Finite(rat(-1, 2)), &[24, 48, 96, 192]).unwrap();
        for w in chain.windows(2) {
            for j in 0..2 {
                assert!(w[0].value[j].lo <= w[1].value[j].lo && w[1].value[j].hi <= w[0].value[j].hi);
                assert!(w[1].value[j].width() <= w[0].value[j].width());
            }
        }
    }
}
