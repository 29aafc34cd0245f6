//! Real points of the discriminant curve that do not come from a real
//! parameter.
//!
//! A complex parameter `lambda` gives a coefficient vector `l(lambda)` in the
//! complexified kernel lattice. Its reduced point is real exactly when
//! `prod_i l_i^w_i` is real for every `w` in a basis of the saturated kernel
//! lattice, i.e. when `sum_i w_i arg l_i` is a multiple of `pi` for both basis
//! vectors. These two equations are solved by Newton's method from a fixed
//! grid in the upper half plane. Nothing here is certified.

use fewroots_core::matrix::integer_kernel;
use fewroots_core::rational::to_f64;
use fewroots_core::IntMatrix;
use fewroots_toric::{integer_exponents, ReducedCurve};
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct IsolatedCandidate {
    /// Real and imaginary part of the parameter, imaginary part positive.
    pub lambda: [f64; 2],
    /// The reduced point `Psi(lambda)`.
    pub point: [f64; 2],
    pub quadrant: [i8; 2],
    /// Largest `|sin(sum w_i arg l_i)|` over the lattice basis at `lambda`.
    pub residual: f64,
    pub certified: bool,
}

struct Forms {
    slope: Vec<f64>,
    constant: Vec<f64>,
}

impl Forms {
    /// Arguments of `l_i(x + iy)` and the partials of each argument.
    fn args(&self, x: f64, y: f64) -> Vec<(f64, f64, f64, f64)> {
        self.slope
            .iter()
            .zip(&self.constant)
            .map(|(&a, &c)| {
                let re = a * x + c;
                let im = a * y;
                let n2 = re * re + im * im;
                (im.atan2(re), -a * im / n2, a * re / n2, n2.sqrt())
            })
            .collect()
    }
}

fn int_rows(rows: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()).collect()
}

/// Saturated integer basis of the plane spanned by the two form vectors.
fn lattice_basis(curve: &ReducedCurve) -> Vec<Vec<f64>> {
    let fam = &curve.forms;
    let spanning = IntMatrix::from_rows(&[fam.u1.clone(), fam.u2.clone()]).expect("two rows of equal length");
    let dual = integer_kernel(&spanning);
    if dual.is_empty() {
        return int_rows(&[fam.u1.clone(), fam.u2.clone()]);
    }
    let dual = IntMatrix::from_rows(&dual).expect("rectangular");
    int_rows(&integer_kernel(&dual))
}

fn residuals(basis: &[Vec<f64>], args: &[(f64, f64, f64, f64)]) -> Vec<(f64, f64, f64)> {
    basis
        .iter()
        .map(|w| {
            let mut th = 0.0;
            let (mut dx, mut dy) = (0.0, 0.0);
            for (wi, a) in w.iter().zip(args) {
                th += wi * a.0;
                dx += wi * a.1;
                dy += wi * a.2;
            }
            (th.sin(), th.cos() * dx, th.cos() * dy)
        })
        .collect()
}

fn newton(forms: &Forms, basis: &[Vec<f64>], mut x: f64, mut y: f64) -> Option<(f64, f64, f64)> {
    for _ in 0..100 {
        let r = residuals(basis, &forms.args(x, y));
        let res = r.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
        if res < 1e-14 {
            return Some((x, y, res));
        }
        let det = r[0].1 * r[1].2 - r[0].2 * r[1].1;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut sx = (r[1].2 * r[0].0 - r[0].2 * r[1].0) / det;
        let mut sy = (-r[1].1 * r[0].0 + r[0].1 * r[1].0) / det;
        let scale = (x * x + y * y).sqrt().max(y);
        let len = (sx * sx + sy * sy).sqrt();
        if len > 0.5 * scale {
            sx *= 0.5 * scale / len;
            sy *= 0.5 * scale / len;
        }
        x -= sx;
        y = (y - sy).max(y / 4.0);
        if !(x.is_finite() && y.is_finite()) || x.abs() > 1e8 || y > 1e8 {
            return None;
        }
    }
    None
}

/// Candidate isolated real points, deduplicated and sorted by parameter.
pub fn isolated_point_candidates(curve: &ReducedCurve) -> Vec<IsolatedCandidate> {
    let forms = Forms {
        slope: curve.forms.forms.iter().map(|f| to_f64(&f.slope)).collect(),
        constant: curve.forms.forms.iter().map(|f| to_f64(&f.constant)).collect(),
    };
    let basis = lattice_basis(curve);
    if basis.len() != 2 {
        return Vec::new();
    }
    let (_, num) = integer_exponents(curve);
    let num = int_rows(&num);
    let b = curve.exponents_f64();

    let mut found: Vec<(f64, f64, f64)> = Vec::new();
    for i in 1..80 {
        let x = (std::f64::consts::PI * (f64::from(i) / 80.0 - 0.5)).tan();
        for k in 0..30 {
            let y = (-6.0 + 9.0 * f64::from(k) / 29.0).exp();
            let Some((x, y, res)) = newton(&forms, &basis, x, y) else { continue };
            let size = 1.0 + x.abs();
            if y < 1e-6 * size {
                continue;
            }
            let args = forms.args(x, y);
            if args.iter().any(|a| a.3 < 1e-12) {
                continue;
            }
            // near a real cusp, nearly real parameters have nearly real images
            // that lie on the real branch
            if let Some((real, _)) = curve.log_abs_psi_f64(x) {
                let gap = (0..2)
                    .map(|j| (b[j].iter().zip(&args).map(|(e, a)| e * a.3.ln()).sum::<f64>() - real[j]).abs())
                    .fold(0.0, f64::max);
                if gap < 1e-4 {
                    continue;
                }
            }
            if found.iter().all(|f| (f.0 - x).abs() + (f.1 - y).abs() > 1e-7 * size) {
                found.push((x, y, res));
            }
        }
    }
    found.sort_by(|p, q| p.0.total_cmp(&q.0));
    found
        .into_iter()
        .map(|(x, y, residual)| {
            let args = forms.args(x, y);
            let quadrant = [0, 1].map(|j| {
                let th: f64 = num[j].iter().zip(&args).map(|(w, a)| w * a.0).sum();
                if th.cos() >= 0.0 {
                    1
                } else {
                    -1
                }
            });
            let point = [0, 1].map(|j| {
                let l: f64 = b[j].iter().zip(&args).map(|(e, a)| e * a.3.ln()).sum();
                f64::from(quadrant[j]) * l.exp()
            });
            IsolatedCandidate { lambda: [x, y], point, quadrant, residual, certified: false }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::haas;

    #[test]
    fn haas_has_three_candidates() {
        let c = isolated_point_candidates(&haas());
        assert_eq!(c.len(), 3, "{c:?}");
        // chamber coordinates are the negated reduced coordinates
        let mut pts: Vec<[f64; 2]> = c.iter().map(|p| [-p.point[0], -p.point[1]]).collect();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let expect =
            [[-1.85627183991, -1.85627183991], [-1.15810417671, 1.92733319558], [1.92733319558, -1.15810417671]];
        for (p, e) in pts.iter().zip(expect) {
            assert!((p[0] - e[0]).abs() < 1e-8 && (p[1] - e[1]).abs() < 1e-8, "{p:?} vs {e:?}");
        }
        assert!(c.iter().all(|p| !p.certified));
    }
}
