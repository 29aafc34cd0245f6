//! Self-intersections of the reduced curve.
//!
//! A node is a pair of distinct parameters with `L(lambda) = L(mu)`, where
//! `L = (log|psi_1|, log|psi_2|)`, lying in cells of the same quadrant. For
//! every compatible pair of cells the chart square is bisected. A box is
//! dropped when an interval enclosure shows it holds no solution, and a
//! solution is accepted only inside a Krawczyk box, which proves existence
//! and uniqueness there. Boxes that reach the width floor undecided are
//! returned, never discarded.
//!
//! The exclusion tests used besides plain enclosures of `c . (L(t) - L(u))`:
//!
//! * near a chart end, the combination `c` orthogonal to that breakpoint's
//!   exponent column removes the logarithmic singularity exactly;
//! * at a breakpoint shared by the two cells, that same combination is analytic
//!   across the breakpoint and strictly monotone nearby, hence injective;
//! * within one cell the divided difference `(L(u) - L(t)) / (u - t)`
//!   replaces `L(u) - L(t)`, and around a cusp it is shown injective on a
//!   convex region containing the cusp, whose only zero is on the diagonal.

use fewroots_core::Interval;
use serde::Serialize;

use crate::chart::{Cell, ChartedCurve, Combo};
use crate::critical::VerticalTangent;
use crate::error::ChartBox;

#[derive(Debug, Clone)]
pub struct NodeOptions {
    /// Boxes narrower than this that are neither excluded nor certified are
    /// reported as unresolved.
    pub min_width: f64,
    /// Newton is tried from boxes narrower than this.
    pub candidate_width: f64,
    /// Width the certified enclosures are contracted to.
    pub target_width: f64,
    pub max_boxes: usize,
}

impl Default for NodeOptions {
    fn default() -> Self {
        NodeOptions { min_width: 1e-12, candidate_width: 1.0 / 128.0, target_width: 1e-13, max_boxes: 20_000_000 }
    }
}

impl NodeOptions {
    pub fn with_precision(eps: f64) -> Self {
        NodeOptions { target_width: eps.min(1e-9), ..NodeOptions::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Node {
    /// Cells of the two branches, `cells.0 <= cells.1`.
    pub cells: (usize, usize),
    #[serde(serialize_with = "crate::ser::interval")]
    pub t: Interval,
    #[serde(serialize_with = "crate::ser::interval")]
    pub u: Interval,
    pub lambda: [f64; 2],
    #[serde(serialize_with = "crate::ser::interval_pair")]
    pub log_point: [Interval; 2],
    pub quadrant: [i8; 2],
}

impl Node {
    pub fn point(&self) -> [f64; 2] {
        [
            f64::from(self.quadrant[0]) * self.log_point[0].mid().exp(),
            f64::from(self.quadrant[1]) * self.log_point[1].mid().exp(),
        ]
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct NodeReport {
    pub nodes: Vec<Node>,
    pub unresolved: Vec<ChartBox>,
    pub boxes_examined: usize,
}

struct Certified {
    cells: (usize, usize),
    t: Interval,
    u: Interval,
}

struct Search<'a> {
    cc: &'a ChartedCurve,
    axes: [Combo; 2],
    perps: Vec<Combo>,
    cusps: Vec<Vec<Interval>>,
    opts: &'a NodeOptions,
    certified: Vec<Certified>,
    report: NodeReport,
}

fn sub_ext(a: Interval, b: Interval) -> Interval {
    let lo = a.lo() - b.hi();
    let hi = a.hi() - b.lo();
    let lo = if lo.is_nan() { f64::NEG_INFINITY } else { lo };
    let hi = if hi.is_nan() { f64::INFINITY } else { hi };
    Interval::new(lo.next_down().min(hi), hi.next_up().max(lo))
}

fn strictly_same_sign(a: Interval, b: Interval) -> bool {
    (a.is_positive() && b.is_positive()) || (a.is_negative() && b.is_negative())
}

type Mat = [[Interval; 2]; 2];

const MEAN_VALUE_WIDTH: f64 = 1.0 / 64.0;
const CUSP_REACH: f64 = 1.0 / 32.0;

fn inverse_f64(m: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

impl<'a> Search<'a> {
    fn new(cc: &'a ChartedCurve, vts: &[VerticalTangent], opts: &'a NodeOptions) -> Self {
        let mut cusps = vec![Vec::new(); cc.cells.len()];
        for v in vts.iter().filter(|v| v.is_cusp) {
            cusps[v.cell].push(v.t);
        }
        Search {
            cc,
            axes: [cc.axis(0), cc.axis(1)],
            perps: (0..cc.breakpoints.len()).map(|r| cc.perp(r)).collect(),
            cusps,
            opts,
            certified: Vec::new(),
            report: NodeReport::default(),
        }
    }

    fn run(mut self) -> NodeReport {
        let k = self.cc.cells.len();
        for i in 0..k {
            for j in i..k {
                if self.cc.cells[i].quadrant != self.cc.cells[j].quadrant {
                    continue;
                }
                if i == j {
                    self.search_same(i);
                } else {
                    self.search_cross(i, j);
                }
            }
        }
        let mut r = self.report;
        r.nodes.sort_by(|a, b| a.log_point[0].mid().total_cmp(&b.log_point[0].mid()));
        r
    }

    fn budget_left(&self) -> bool {
        self.report.boxes_examined < self.opts.max_boxes
    }

    fn inside_certified(&self, cells: (usize, usize), t: Interval, u: Interval) -> bool {
        self.certified.iter().any(|c| c.cells == cells && t.subset_of(&c.t) && u.subset_of(&c.u))
    }

    fn cross_combos(&self, ci: &Cell, cj: &Cell) -> Vec<&Combo> {
        let mut v: Vec<&Combo> = self.axes.iter().collect();
        for r in [ci.start, ci.end, cj.start, cj.end] {
            v.push(&self.perps[r]);
        }
        v
    }

    fn g_enclosure(&self, ci: &Cell, cj: &Cell, c: &Combo, t: Interval, u: Interval) -> Interval {
        sub_ext(ci.log_value(c, t), cj.log_value(c, u))
    }

    fn exclude_cross(&self, ci: &Cell, cj: &Cell, t: Interval, u: Interval) -> bool {
        for c in self.cross_combos(ci, cj) {
            if !self.g_enclosure(ci, cj, c, t, u).contains_zero() {
                return true;
            }
        }
        if t.width().max(u.width()) <= MEAN_VALUE_WIDTH && self.exclude_mean_value(ci, cj, t, u) {
            return true;
        }
        // a breakpoint shared by the two cells: the combination without a
        // singular term there is monotone through it
        if ci.end == cj.start {
            let f = &self.perps[ci.end];
            let a = ci.dlog(f, Interval::new(t.lo(), 1.0));
            let b = cj.dlog(f, Interval::new(0.0, u.hi()));
            if strictly_same_sign(a, b) {
                return true;
            }
        }
        if ci.start == cj.end {
            let f = &self.perps[ci.start];
            let a = ci.dlog(f, Interval::new(0.0, t.hi()));
            let b = cj.dlog(f, Interval::new(u.lo(), 1.0));
            if strictly_same_sign(a, b) {
                return true;
            }
        }
        false
    }

    /// Mean-value form of `c . G` around the box centre for a few directions
    /// `c`: the rows of the inverse midpoint Jacobian and the normals of the
    /// two branches. Separates branches that run close and nearly parallel.
    fn exclude_mean_value(&self, ci: &Cell, cj: &Cell, t: Interval, u: Interval) -> bool {
        let (tm, um) = (t.mid(), u.mid());
        let g = self.g_point(ci, cj, tm, um);
        let jx = self.jacobian(ci, cj, t, u);
        if jx.iter().flatten().any(|v| !v.is_finite()) || g.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let jm = self.jacobian(ci, cj, Interval::point(tm), Interval::point(um)).map(|r| r.map(|v| v.mid()));
        let mut dirs = vec![[-jm[1][0], jm[0][0]], [jm[1][1], -jm[0][1]]];
        if let Some(y) = inverse_f64(jm) {
            dirs.extend(y);
        }
        let dx = [t - Interval::point(tm), u - Interval::point(um)];
        dirs.iter().any(|c| {
            let ci = c.map(Interval::point);
            let mut acc = ci[0] * g[0] + ci[1] * g[1];
            for (col, d) in dx.iter().enumerate() {
                acc = acc + (ci[0] * jx[0][col] + ci[1] * jx[1][col]) * *d;
            }
            acc.is_finite() && !acc.contains_zero()
        })
    }

    fn search_cross(&mut self, i: usize, j: usize) {
        let cc = self.cc;
        let (ci, cj) = (&cc.cells[i], &cc.cells[j]);
        let mut stack = vec![(Interval::new(0.0, 1.0), Interval::new(0.0, 1.0))];
        while let Some((t, u)) = stack.pop() {
            if !self.budget_left() {
                self.report.unresolved.push(ChartBox { cells: (i, j), t: [t.lo(), t.hi()], u: [u.lo(), u.hi()] });
                continue;
            }
            self.report.boxes_examined += 1;
            if self.inside_certified((i, j), t, u) || self.exclude_cross(ci, cj, t, u) {
                continue;
            }
            let w = t.width().max(u.width());
            if w <= self.opts.candidate_width {
                self.try_candidate(i, j, t.mid(), u.mid());
                if self.inside_certified((i, j), t, u) {
                    continue;
                }
            }
            if w <= self.opts.min_width {
                self.report.unresolved.push(ChartBox { cells: (i, j), t: [t.lo(), t.hi()], u: [u.lo(), u.hi()] });
                continue;
            }
            if t.width() >= u.width() {
                let (a, b) = t.split();
                stack.push((a, u));
                stack.push((b, u));
            } else {
                let (a, b) = u.split();
                stack.push((t, a));
                stack.push((t, b));
            }
        }
    }

    /// Same-cell search in `s = (t + u)/2`, `h = (u - t)/2 > 0`.
    fn search_same(&mut self, i: usize) {
        let cc = self.cc;
        let cell = &cc.cells[i];
        let combos: Vec<Combo> = vec![
            self.axes[0].clone(),
            self.axes[1].clone(),
            self.perps[cell.start].clone(),
            self.perps[cell.end].clone(),
        ];
        let mut stack = vec![(Interval::new(0.0, 1.0), Interval::new(0.0, 0.5))];
        while let Some((s, h)) = stack.pop() {
            let as_tu = || (s - h, s + h);
            if !self.budget_left() {
                let (t, u) = as_tu();
                self.report.unresolved.push(ChartBox { cells: (i, i), t: [t.lo(), t.hi()], u: [u.lo(), u.hi()] });
                continue;
            }
            self.report.boxes_examined += 1;
            let reach = s.hi().min(1.0 - s.lo()).min(0.5);
            if h.lo() >= reach {
                continue;
            }
            let (t, u) = as_tu();
            if self.inside_certified((i, i), t, u) {
                continue;
            }
            let w = h.sqr();
            if combos.iter().any(|c| !cell.divided_difference(c, s, w).contains_zero()) {
                continue;
            }
            if s.width().max(h.width()) <= MEAN_VALUE_WIDTH && self.exclude_dd_mean_value(cell, s, w) {
                continue;
            }
            if self.cusp_injective(cell, s, w) {
                continue;
            }
            if h.lo() > 0.0 && !self.exclude_cross(cell, cell, clamp(t), clamp(u)) {
                let wd = s.width().max(h.width());
                if wd <= self.opts.candidate_width {
                    self.try_candidate(i, i, t.mid(), u.mid());
                    if self.inside_certified((i, i), t, u) {
                        continue;
                    }
                }
            } else if h.lo() > 0.0 {
                continue;
            }
            if s.width().max(h.width()) <= self.opts.min_width {
                self.report.unresolved.push(ChartBox { cells: (i, i), t: [t.lo(), t.hi()], u: [u.lo(), u.hi()] });
                continue;
            }
            if s.width() >= h.width() {
                let (a, b) = s.split();
                stack.push((a, h));
                stack.push((b, h));
            } else {
                let (a, b) = h.split();
                stack.push((s, a));
                stack.push((s, b));
            }
        }
    }

    /// Mean-value exclusion for the divided difference, preconditioned by the
    /// inverse of its Jacobian at the box centre.
    fn exclude_dd_mean_value(&self, cell: &Cell, s: Interval, w: Interval) -> bool {
        let (sm, wm) = (s.mid(), w.mid());
        let (sp, wp) = (Interval::point(sm), Interval::point(wm));
        let hm = [0, 1].map(|k| cell.divided_difference(&self.axes[k], sp, wp));
        let jx = [0, 1].map(|k| {
            let (a, b) = cell.divided_difference_grad(&self.axes[k], s, w);
            [a, b]
        });
        if jx.iter().flatten().chain(hm.iter()).any(|v| !v.is_finite()) {
            return false;
        }
        let jm = [0, 1].map(|k| {
            let (a, b) = cell.divided_difference_grad(&self.axes[k], sp, wp);
            [a.mid(), b.mid()]
        });
        let Some(y) = inverse_f64(jm) else { return false };
        let dx = [s - sp, w - wp];
        y.iter().any(|c| {
            let c = c.map(Interval::point);
            let mut acc = c[0] * hm[0] + c[1] * hm[1];
            for (col, d) in dx.iter().enumerate() {
                acc = acc + (c[0] * jx[0][col] + c[1] * jx[1][col]) * *d;
            }
            acc.is_finite() && !acc.contains_zero()
        })
    }

    /// The divided-difference map `(s, w) -> H` is injective on the convex
    /// hull of the box and a nearby cusp (which is a zero of `H` on `w = 0`)
    /// when its interval Jacobian is regular.
    fn cusp_injective(&self, cell: &Cell, s: Interval, w: Interval) -> bool {
        for ts in &self.cusps[cell.index] {
            let gap = (ts.lo() - s.hi()).max(s.lo() - ts.hi()).max(0.0);
            if gap > (4.0 * s.width()).max(CUSP_REACH) {
                continue;
            }
            let rs = s.hull(ts);
            let rw = Interval::new(0.0, w.hi());
            let (a, b) = cell.divided_difference_grad(&self.axes[0], rs, rw);
            let (c, d) = cell.divided_difference_grad(&self.axes[1], rs, rw);
            let det = a * d - b * c;
            if det.is_finite() && !det.contains_zero() {
                return true;
            }
        }
        false
    }

    fn g_point(&self, ci: &Cell, cj: &Cell, t: f64, u: f64) -> [Interval; 2] {
        [0, 1].map(|k| self.g_enclosure(ci, cj, &self.axes[k], Interval::point(t), Interval::point(u)))
    }

    fn jacobian(&self, ci: &Cell, cj: &Cell, t: Interval, u: Interval) -> Mat {
        [0, 1].map(|k| [ci.dlog(&self.axes[k], t), -cj.dlog(&self.axes[k], u)])
    }

    fn newton(&self, ci: &Cell, cj: &Cell, mut t: f64, mut u: f64) -> Option<(f64, f64)> {
        for _ in 0..60 {
            let g = self.g_point(ci, cj, t, u).map(|v| v.mid());
            let jm = self.jacobian(ci, cj, Interval::point(t), Interval::point(u));
            let y = inverse_f64([[jm[0][0].mid(), jm[0][1].mid()], [jm[1][0].mid(), jm[1][1].mid()]])?;
            let dt = y[0][0] * g[0] + y[0][1] * g[1];
            let du = y[1][0] * g[0] + y[1][1] * g[1];
            let step = dt.abs().max(du.abs());
            let damp = if step > 0.05 { 0.05 / step } else { 1.0 };
            t -= damp * dt;
            u -= damp * du;
            if !(t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0) {
                return None;
            }
            if step < 1e-15 {
                return Some((t, u));
            }
        }
        None
    }

    /// `K(X) = x - Y G(x) + (I - Y J(X)) (X - x)` with `Y` the inverse of the
    /// midpoint Jacobian. Returns `K` when it lies in the interior of `X`.
    fn krawczyk(&self, ci: &Cell, cj: &Cell, t: Interval, u: Interval) -> Option<(Interval, Interval)> {
        let (tm, um) = (t.mid(), u.mid());
        let g = self.g_point(ci, cj, tm, um);
        let jx = self.jacobian(ci, cj, t, u);
        if jx.iter().flatten().any(|v| !v.is_finite()) || g.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let y = inverse_f64([[jx[0][0].mid(), jx[0][1].mid()], [jx[1][0].mid(), jx[1][1].mid()]])?;
        let yi = y.map(|r| r.map(Interval::point));
        let dx = [t - Interval::point(tm), u - Interval::point(um)];
        let mut k = [Interval::point(tm), Interval::point(um)];
        for r in 0..2 {
            let yg = yi[r][0] * g[0] + yi[r][1] * g[1];
            let mut acc = Interval::point(if r == 0 { tm } else { um }) - yg;
            for (c, dxc) in dx.iter().enumerate() {
                let yj = yi[r][0] * jx[0][c] + yi[r][1] * jx[1][c];
                let m = Interval::point(if r == c { 1.0 } else { 0.0 }) - yj;
                acc = acc + m * *dxc;
            }
            k[r] = acc;
        }
        (k[0].interior_of(&t) && k[1].interior_of(&u)).then_some((k[0], k[1]))
    }

    fn try_candidate(&mut self, i: usize, j: usize, t0: f64, u0: f64) {
        let cc = self.cc;
        let (ci, cj) = (&cc.cells[i], &cc.cells[j]);
        let Some((t, u)) = self.newton(ci, cj, t0, u0) else { return };
        if i == j && u - t < 1e-9 {
            return;
        }
        if self.certified.iter().any(|c| c.cells == (i, j) && c.t.contains(t) && c.u.contains(u)) {
            return;
        }
        let mut r = 1e-3;
        while r >= 1e-11 {
            let (tx, ux) = (Interval::new(t - r, t + r), Interval::new(u - r, u + r));
            let inside = tx.lo() > 0.0 && tx.hi() < 1.0 && ux.lo() > 0.0 && ux.hi() < 1.0;
            if inside && (i != j || tx.hi() < ux.lo()) {
                if let Some((mut kt, mut ku)) = self.krawczyk(ci, cj, tx, ux) {
                    for _ in 0..60 {
                        if kt.width().max(ku.width()) <= self.opts.target_width {
                            break;
                        }
                        match self.krawczyk(ci, cj, kt, ku) {
                            Some((a, b)) if a.width() < kt.width() || b.width() < ku.width() => {
                                kt = a;
                                ku = b;
                            }
                            _ => break,
                        }
                    }
                    self.record(i, j, tx, ux, kt, ku);
                    return;
                }
            }
            r /= 3.0;
        }
    }

    fn record(&mut self, i: usize, j: usize, region_t: Interval, region_u: Interval, t: Interval, u: Interval) {
        let cc = self.cc;
        let (ci, cj) = (&cc.cells[i], &cc.cells[j]);
        let log_point = [0, 1].map(|k| {
            let a = ci.log_value(&self.axes[k], t);
            let b = cj.log_value(&self.axes[k], u);
            a.intersect(&b).unwrap_or(a)
        });
        self.certified.push(Certified { cells: (i, j), t: region_t, u: region_u });
        self.report.nodes.push(Node {
            cells: (i, j),
            t,
            u,
            lambda: [ci.lambda_f64(t.mid()), cj.lambda_f64(u.mid())],
            log_point,
            quadrant: ci.quadrant,
        });
    }
}

fn clamp(x: Interval) -> Interval {
    crate::chart::clamp_unit(x)
}

/// Runs the node search over every pair of sign-compatible cells.
pub fn nodes_charted(cc: &ChartedCurve, vts: &[VerticalTangent], opts: &NodeOptions) -> NodeReport {
    Search::new(cc, vts, opts).run()
}

/// Convenience wrapper building the chart data first.
pub fn nodes(curve: &fewroots_toric::ReducedCurve, opts: &NodeOptions) -> Result<NodeReport, crate::ChamberError> {
    let cc = ChartedCurve::new(curve)?;
    let vts = crate::critical::vertical_tangents_charted(&cc)?;
    Ok(nodes_charted(&cc, &vts, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::haas;

    const HAAS_NODES: [f64; 10] = [
        1.41767594900,
        1.41790510558,
        1.41821476967,
        1.43683087662,
        1.47813022442,
        1.48488178680,
        1.59316011321,
        1.60149022139,
        2.45494131563,
        2.47089273858,
    ];

    #[test]
    fn haas_nodes_in_the_positive_quadrant() {
        let rep = nodes(&haas(), &NodeOptions::default()).unwrap();
        assert!(rep.unresolved.is_empty(), "{} unresolved", rep.unresolved.len());
        let pos: Vec<&Node> = rep.nodes.iter().filter(|n| n.quadrant == [-1, -1]).collect();
        let mut a: Vec<f64> = pos.iter().map(|n| -n.point()[0]).collect();
        a.sort_by(f64::total_cmp);
        assert_eq!(a.len(), 10, "{a:?}");
        for (x, e) in a.iter().zip(HAAS_NODES) {
            assert!((x - e).abs() < 1e-6, "{x} vs {e}");
        }
        // closed under the swap of coordinates
        for n in &pos {
            let p = n.point();
            assert!(pos.iter().any(|m| {
                let q = m.point();
                (q[0] - p[1]).abs() < 1e-9 && (q[1] - p[0]).abs() < 1e-9
            }));
        }
    }
}
