//! Axis limits at breakpoints, vertical tangents and cusps.

use fewroots_core::rational::{pow2, to_f64};
use fewroots_core::{Interval, IsolatingInterval, Rational, SturmSequence, UniPoly};
use fewroots_toric::{log_derivative_poly, ProjectiveParam, ReducedCurve};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chart::{ChartedCurve, LimitKind};
use crate::error::{ChamberError, ChartBox};
use crate::isolated::{isolated_point_candidates, IsolatedCandidate};
use crate::nodes::{nodes_charted, Node, NodeOptions};

/// Limits of `Psi` at one breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisHit {
    pub breakpoint: usize,
    #[serde(serialize_with = "crate::ser::projective")]
    pub root: ProjectiveParam,
    #[serde(serialize_with = "crate::ser::rational_pair")]
    pub exps: [Rational; 2],
    pub limits: [LimitKind; 2],
    /// Quadrants of the cells before and after the breakpoint.
    pub quadrants: [[i8; 2]; 2],
}

impl AxisHit {
    /// `psi_2 -> 0` here: a point of the curve on the `x`-axis (possibly at infinity).
    pub fn meets_x_axis(&self) -> bool {
        self.limits[1] == LimitKind::Zero
    }

    /// Finite nonzero `x` with `y -> inf`.
    pub fn is_vertical_asymptote(&self) -> bool {
        matches!(self.limits[0], LimitKind::Finite { .. }) && self.limits[1] == LimitKind::Infinite
    }
}

/// A point where `d log|psi_1| / d lambda` vanishes.
#[derive(Debug, Clone, Serialize)]
pub struct VerticalTangent {
    pub cell: usize,
    /// Exact isolation of the chart parameter.
    #[serde(skip)]
    pub root: IsolatingInterval,
    #[serde(serialize_with = "crate::ser::interval")]
    pub t: Interval,
    pub lambda: f64,
    pub is_cusp: bool,
    /// Enclosures of `log|psi_1|`, `log|psi_2|`.
    #[serde(serialize_with = "crate::ser::interval_pair")]
    pub log_point: [Interval; 2],
    pub quadrant: [i8; 2],
}

impl VerticalTangent {
    pub fn point(&self) -> [f64; 2] {
        [
            f64::from(self.quadrant[0]) * self.log_point[0].mid().exp(),
            f64::from(self.quadrant[1]) * self.log_point[1].mid().exp(),
        ]
    }
}

/// Sign of `e` as a limit kind, with the finite value supplied lazily.
fn limit_kind(e: &Rational, finite: impl FnOnce() -> Interval) -> LimitKind {
    if e > &Rational::zero() {
        LimitKind::Zero
    } else if e < &Rational::zero() {
        LimitKind::Infinite
    } else {
        let v = finite().exp();
        LimitKind::Finite { lo: v.lo(), hi: v.hi() }
    }
}

/// Classifies each breakpoint by the signs of its exponent column: a positive
/// entry sends that coordinate to zero, a negative one to infinity, and a
/// zero entry gives a finite nonzero limit.
pub fn axis_intersections_charted(cc: &ChartedCurve) -> Vec<AxisHit> {
    let k = cc.cells.len();
    cc.breakpoints
        .iter()
        .enumerate()
        .map(|(r, b)| {
            let before = &cc.cells[(r + k - 1) % k];
            let after = &cc.cells[r];
            let limits = [0, 1].map(|j| limit_kind(&b.exps[j], || before.log_value(&cc.axis(j), Interval::point(1.0))));
            AxisHit {
                breakpoint: r,
                root: b.root.clone(),
                exps: b.exps.clone(),
                limits,
                quadrants: [before.quadrant, after.quadrant],
            }
        })
        .collect()
}

pub fn axis_intersections(curve: &ReducedCurve) -> Result<Vec<AxisHit>, ChamberError> {
    Ok(axis_intersections_charted(&ChartedCurve::new(curve)?))
}

fn refine_to_f64(iv: &mut IsolatingInterval) -> Interval {
    iv.refine(&pow2(-80));
    let (lo, hi) = iv.to_f64_bounds();
    Interval::new(lo, hi)
}

fn has_root_in(g: &UniPoly, iv: &IsolatingInterval) -> Result<bool, ChamberError> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    if iv.is_exact() {
        return Ok(g.eval(&iv.lo).is_zero());
    }
    let s = SturmSequence::new(g)?;
    Ok(s.count_in(&iv.lo, &iv.hi) > 0)
}

/// All vertical tangents, found cell by cell as the roots in `(0, 1)` of the
/// chart numerator of `d log|psi_1|/dt`. A root is a cusp when it is also a
/// root of the `psi_2` numerator. The point at infinity needs no special
/// treatment since it is interior to some chart.
pub fn vertical_tangents_charted(cc: &ChartedCurve) -> Result<Vec<VerticalTangent>, ChamberError> {
    let mut out = Vec::new();
    let zero = Rational::zero();
    let one = Rational::one();
    for cell in &cc.cells {
        let p1 = cell.log_derivative_numerator(0);
        if p1.is_zero() {
            return Err(ChamberError::Degenerate(format!("log|psi_1| is constant on cell {}", cell.index)));
        }
        let p2 = cell.log_derivative_numerator(1);
        let g = if p2.is_zero() { p1.clone() } else { p1.gcd(&p2) };
        let roots = SturmSequence::new(&p1)?.isolate(Some((&zero, &one)));
        for mut iv in roots {
            let is_cusp = has_root_in(&g, &iv)?;
            let t = refine_to_f64(&mut iv);
            let log_point = [cc.axis(0), cc.axis(1)].map(|c| cell.log_value(&c, t));
            out.push(VerticalTangent {
                cell: cell.index,
                lambda: cell.lambda_f64(to_f64(&iv.midpoint())),
                root: iv,
                t,
                is_cusp,
                log_point,
                quadrant: cell.quadrant,
            });
        }
    }
    Ok(out)
}

pub fn vertical_tangents(curve: &ReducedCurve) -> Result<Vec<VerticalTangent>, ChamberError> {
    vertical_tangents_charted(&ChartedCurve::new(curve)?)
}

pub fn cusps(curve: &ReducedCurve) -> Result<Vec<VerticalTangent>, ChamberError> {
    Ok(vertical_tangents(curve)?.into_iter().filter(|v| v.is_cusp).collect())
}

/// `gcd` of the two affine log-derivative numerators in `lambda`. Its real
/// roots are the finite cusp parameters; a cusp at `lambda = inf` shows up as
/// a degree drop and is caught by the chart computation instead.
pub fn cusp_polynomial(curve: &ReducedCurve) -> UniPoly {
    let p1 = log_derivative_poly(curve, 0);
    let p2 = log_derivative_poly(curve, 1);
    if p1.is_zero() {
        return p2;
    }
    if p2.is_zero() {
        return p1;
    }
    p1.gcd(&p2)
}

/// Everything the strip decomposition needs about one curve.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalSet {
    pub axis_hits: Vec<AxisHit>,
    /// All vertical tangents; cusps are the ones flagged `is_cusp`.
    pub vertical_tangents: Vec<VerticalTangent>,
    pub nodes: Vec<Node>,
    /// Node-search boxes that were neither excluded nor certified.
    pub unresolved: Vec<ChartBox>,
    pub isolated: Vec<IsolatedCandidate>,
}

/// The four feature counts of the critical-point method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeatureCounts {
    /// Points of the curve on the `x`-axis, at zeros of `psi_2`.
    pub axis: usize,
    pub cusps: usize,
    /// Vertical tangents (cusps included) plus vertical asymptotes.
    pub vertical: usize,
    pub nodes: usize,
}

impl CriticalSet {
    pub fn compute(curve: &ReducedCurve, opts: &NodeOptions) -> Result<Self, ChamberError> {
        let cc = ChartedCurve::new(curve)?;
        Self::compute_charted(curve, &cc, opts)
    }

    pub fn compute_charted(curve: &ReducedCurve, cc: &ChartedCurve, opts: &NodeOptions) -> Result<Self, ChamberError> {
        let vertical_tangents = vertical_tangents_charted(cc)?;
        let report = nodes_charted(cc, &vertical_tangents, opts);
        Ok(CriticalSet {
            axis_hits: axis_intersections_charted(cc),
            vertical_tangents,
            nodes: report.nodes,
            unresolved: report.unresolved,
            isolated: isolated_point_candidates(curve),
        })
    }

    pub fn cusps(&self) -> impl Iterator<Item = &VerticalTangent> {
        self.vertical_tangents.iter().filter(|v| v.is_cusp)
    }

    pub fn counts(&self) -> FeatureCounts {
        FeatureCounts {
            axis: self.axis_hits.iter().filter(|h| h.meets_x_axis()).count(),
            cusps: self.cusps().count(),
            vertical: self.vertical_tangents.len()
                + self.axis_hits.iter().filter(|h| h.is_vertical_asymptote()).count(),
            nodes: self.nodes.len(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::haas;
    use fewroots_core::rational::rat;
    use fewroots_core::sturm::isolate_real_roots;

    #[test]
    fn haas_axis_hit_at_infinity() {
        let hits = axis_intersections(&haas()).unwrap();
        assert_eq!(hits.len(), 6);
        let inf = hits.iter().find(|h| h.root == ProjectiveParam::Infinity).unwrap();
        assert_eq!(inf.limits[1], LimitKind::Zero);
        let LimitKind::Finite { lo, hi } = inf.limits[0] else { panic!("x limit should be finite") };
        assert!(lo <= 1.24487176148 + 1e-10 && hi >= 1.24487176148 - 1e-10, "[{lo}, {hi}]");
        let x_axis = hits.iter().filter(|h| h.meets_x_axis()).count();
        assert!(x_axis <= 5);
        assert!(hits.iter().all(|h| !h.is_vertical_asymptote()));
    }

    #[test]
    fn haas_cusps() {
        let vts = vertical_tangents(&haas()).unwrap();
        assert_eq!(vts.len(), 3);
        assert!(vts.iter().all(|v| v.is_cusp));
        let mut a: Vec<f64> = vts.iter().map(|v| -v.point()[0]).collect();
        a.sort_by(f64::total_cmp);
        for (x, e) in a.iter().zip([1.41544129863, 1.41666026637, 1.41951679775]) {
            assert!((x - e).abs() < 1e-8, "{x} vs {e}");
        }
        let lam: Vec<f64> = vts.iter().map(|v| v.lambda).collect();
        assert!(lam.iter().any(|l| (l + 3.0 / 7.0).abs() < 1e-12));
    }

    #[test]
    fn affine_cusp_polynomial_matches_charts() {
        let c = haas();
        let g = cusp_polynomial(&c);
        let mut roots = isolate_real_roots(&g).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &mut roots {
            r.refine(&rat(1, 1 << 50));
        }
        assert!(roots.iter().any(|r| r.contains(&rat(-3, 7))));
        let vts = cusps(&c).unwrap();
        for r in &roots {
            assert!(vts.iter().any(|v| (v.lambda - r.approx()).abs() < 1e-9));
        }
        // the row-2 numerator is divisible by the gcd
        let p2 = log_derivative_poly(&c, 1);
        assert!(p2.rem(&g).is_zero());
    }

    #[test]
    fn perturbed_exponent_kills_cusps() {
        let mut c = haas();
        c.exponents[(0, 1)] = &c.exponents[(0, 1)] + rat(1, 999);
        c.exponents[(0, 0)] = &c.exponents[(0, 0)] - rat(1, 999);
        let g = cusp_polynomial(&c);
        assert_eq!(g.degree(), Some(0));
        assert!(cusps(&c).unwrap().is_empty());
    }

    fn closed_under_swap(points: &[[f64; 2]], tol: f64) -> bool {
        points.iter().all(|p| points.iter().any(|q| (p[0] - q[1]).abs() < tol && (p[1] - q[0]).abs() < tol))
    }

    #[test]
    fn haas_features_are_symmetric() {
        let cs = CriticalSet::compute(&haas(), &NodeOptions::default()).unwrap();
        assert!(cs.is_complete());
        let nodes: Vec<[f64; 2]> = cs.nodes.iter().map(|n| n.point()).collect();
        assert!(closed_under_swap(&nodes, 1e-9), "{nodes:?}");
        let cusps: Vec<[f64; 2]> = cs.cusps().map(|v| v.point()).collect();
        assert!(closed_under_swap(&cusps, 1e-9), "{cusps:?}");
        let iso: Vec<[f64; 2]> = cs.isolated.iter().map(|p| p.point).collect();
        assert!(closed_under_swap(&iso, 1e-7), "{iso:?}");
    }
}
