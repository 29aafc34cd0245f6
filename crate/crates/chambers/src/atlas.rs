//! Chamber decomposition of each open quadrant of the reduced plane.
//!
//! Everything happens in the log coordinates `(X, Y) = (ln|x|, ln|y|)` of one
//! quadrant, where the curve is a union of arcs: the cells in that quadrant,
//! cut at their vertical tangents so that `X` is monotone on each arc. The
//! vertical lines through all critical `X` values of one `x`-side (vertical
//! tangents, nodes, finite `x` limits at breakpoints, isolated points) cut the
//! side into strips. Inside an open strip no arc ends or meets another, so
//! the pieces of a strip are ordered by the `Y` value at which the crossing
//! arcs meet the midline. Two pieces in neighbouring strips belong to the
//! same chamber when their traces on the common line overlap in a segment.

use std::collections::HashMap;

use fewroots_core::rational::{from_f64, parse_rational, to_f64};
use fewroots_core::{Interval, Rational};
use fewroots_toric::ReducedCurve;
use num_traits::Zero;
use serde::Serialize;

use crate::chart::{Cell, ChartedCurve, Combo};
use crate::critical::CriticalSet;
use crate::error::ChamberError;

#[derive(Debug, Clone)]
pub struct AtlasOptions {
    /// Sign flips from reduced to chamber coordinates; the representatives
    /// and quadrant labels are reported in chamber coordinates.
    pub chamber_signs: [i8; 2],
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions { chamber_signs: [1, 1] }
    }
}

/// What a strip boundary passes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineKind {
    VerticalTangent {
        id: usize,
    },
    Node {
        id: usize,
    },
    /// Finite `x` limit at a breakpoint: an `x`-axis point or a vertical asymptote.
    AxisLimit {
        breakpoint: usize,
    },
    Isolated {
        id: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct StripLine {
    #[serde(flatten)]
    pub kind: LineKind,
    /// Enclosure of `ln|x|` on the line.
    #[serde(serialize_with = "crate::ser::interval")]
    pub log_x: Interval,
}

#[derive(Debug, Clone, Serialize)]
pub struct Strip {
    /// Signs of the reduced coordinates.
    pub quadrant: [i8; 2],
    pub index: usize,
    /// `ln|x|` bounds; `None` for the unbounded ends.
    pub log_x: [Option<f64>; 2],
    pub midline: f64,
    /// `ln|y|` enclosures of the crossings of the midline, increasing.
    pub crossings: Vec<[f64; 2]>,
    /// Chamber id of each piece, bottom to top.
    pub pieces: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Chamber {
    pub id: usize,
    /// Signs of the reduced coordinates.
    pub quadrant: [i8; 2],
    /// Signs in chamber coordinates.
    pub label: String,
    /// A rational point of the chamber in chamber coordinates.
    #[serde(serialize_with = "crate::ser::rational_pair")]
    pub rep: [Rational; 2],
    /// Census sense: the chamber does not contain an unbounded open cone of
    /// the log plane together with points of arbitrarily large norm.
    pub bounded: bool,
    /// Plain boundedness in the plane.
    pub topologically_bounded: bool,
    /// Number of asymptotic sectors of the log plane the chamber contains.
    pub sectors: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadrantCensus {
    pub quadrant: [i8; 2],
    pub label: String,
    pub chambers: usize,
    pub bounded: usize,
    pub unbounded: usize,
    pub topologically_unbounded: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Side {
    pub sign: i8,
    pub lines: Vec<StripLine>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChamberAtlas {
    pub chamber_signs: [i8; 2],
    pub sides: Vec<Side>,
    pub strips: Vec<Strip>,
    pub components: Vec<Chamber>,
    pub census: Vec<QuadrantCensus>,
    /// Number of pieces of all strips together.
    pub refinement_pieces: usize,
    pub critical: CriticalSet,
    #[serde(skip)]
    geometry: Geometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum PointKey {
    Vt(usize),
    Node(usize),
    Crossing(usize, usize),
}

#[derive(Debug, Clone, Copy)]
enum Value {
    Bottom,
    Top,
    At(PointKey, Interval),
}

fn less(a: &Value, b: &Value) -> Option<bool> {
    match (a, b) {
        (Value::Bottom, Value::Bottom) | (Value::Top, _) => Some(false),
        (Value::Bottom, _) | (_, Value::Top) => Some(true),
        (_, Value::Bottom) => Some(false),
        (Value::At(ka, ya), Value::At(kb, yb)) => {
            if ka == kb {
                Some(false)
            } else if ya.hi() < yb.lo() {
                Some(true)
            } else if yb.hi() < ya.lo() {
                Some(false)
            } else {
                None
            }
        }
    }
}

#[derive(Debug, Clone)]
struct ArcEnd {
    /// Chart parameter in `sigma` form; `None` at a breakpoint.
    sigma: Option<Interval>,
    /// Line index: 0 is `X = -inf`, `n + 1` is `X = +inf`.
    line: usize,
    /// Value on that line; at the infinite lines only the `Y` limit when it is infinite.
    value: Option<Value>,
}

#[derive(Debug, Clone)]
struct Arc {
    cell: usize,
    quadrant: [i8; 2],
    /// Ordered by increasing chart parameter.
    ends: [ArcEnd; 2],
    nodes: Vec<usize>,
}

impl Arc {
    fn span(&self) -> (usize, usize) {
        let (a, b) = (self.ends[0].line, self.ends[1].line);
        (a.min(b), a.max(b))
    }

    fn increasing(&self) -> bool {
        self.ends[0].line < self.ends[1].line
    }
}

#[derive(Debug, Clone, Default)]
struct Geometry {
    cc: Option<ChartedCurve>,
    mirrors: Vec<Cell>,
    axes: Vec<Combo>,
    sides: Vec<Vec<StripLine>>,
    arcs: Vec<Arc>,
    node_y: Vec<Interval>,
    /// Per quadrant index: strips and their sorted crossing arcs.
    strip_arcs: HashMap<(usize, usize), Vec<(usize, Interval)>>,
    piece_chamber: HashMap<(usize, usize, usize), usize>,
}

const QUADRANTS: [[i8; 2]; 4] = [[1, 1], [-1, 1], [-1, -1], [1, -1]];

fn side_index(sign: i8) -> usize {
    usize::from(sign < 0)
}

fn quadrant_index(q: [i8; 2]) -> usize {
    QUADRANTS.iter().position(|&p| p == q).expect("a sign pair")
}

pub fn quadrant_label(q: [i8; 2]) -> String {
    q.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn ln2() -> Interval {
    Interval::point(2.0).ln()
}

/// `sigma = ln(2t)` for `t <= 1/2` and `-ln(2(1 - t))` above; increasing and
/// exponentially fine near both chart ends.
fn sigma_of_t(t: Interval) -> Interval {
    let one = Interval::point(1.0);
    let lower = |t: Interval| (t.scale(2.0)).ln();
    let upper = |t: Interval| -((one - t).scale(2.0)).ln();
    if t.hi() <= 0.5 {
        lower(t)
    } else if t.lo() >= 0.5 {
        upper(t)
    } else {
        lower(Interval::new(t.lo(), 0.5)).hull(&upper(Interval::new(0.5, t.hi())))
    }
}

fn precision(what: impl Into<String>) -> ChamberError {
    ChamberError::PrecisionExhausted { what: what.into(), boxes: Vec::new() }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Geometry {
    fn cc(&self) -> &ChartedCurve {
        self.cc.as_ref().expect("geometry is built")
    }

    /// `log|psi_j|` over a `sigma` interval of a cell.
    fn eval(&self, cell: usize, j: usize, s: Interval) -> Interval {
        let combo = &self.axes[j];
        let mut out: Option<Interval> = None;
        if s.lo() <= 0.0 {
            let part = Interval::new(s.lo(), s.hi().min(0.0));
            let v = self.cc().cells[cell].log_value_tau(combo, part - ln2());
            out = Some(v);
        }
        if s.hi() > 0.0 {
            let part = Interval::new(s.lo().max(0.0), s.hi());
            let v = self.mirrors[cell].log_value_tau(combo, -part - ln2());
            out = Some(out.map_or(v, |o| o.hull(&v)));
        }
        out.expect("nonempty interval")
    }

    fn sign_at(&self, arc: &Arc, target: Interval, p: f64) -> i8 {
        let f = self.eval(arc.cell, 0, Interval::point(p)) - target;
        if f.lo() > 0.0 {
            1
        } else if f.hi() < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Bracket in `sigma` of the unique parameter with `X = target`, which
    /// must lie strictly inside the `X` range of the arc.
    fn solve(&self, arc: &Arc, target: Interval) -> Result<Interval, ChamberError> {
        let dir: i8 = if arc.increasing() { 1 } else { -1 };
        let fail = || precision(format!("crossing of an arc of cell {} with ln|x| = {}", arc.cell, target));
        let inner = |e: &ArcEnd| e.sigma.map(|s| s.mid());
        let lo = match arc.ends[0].sigma {
            Some(s) => {
                if self.sign_at(arc, target, s.hi()) != -dir {
                    return Err(fail());
                }
                s.hi()
            }
            None => {
                let start = inner(&arc.ends[1]).unwrap_or(0.0);
                let mut step = 1.0;
                loop {
                    let p = start - step;
                    if self.sign_at(arc, target, p) == -dir {
                        break p;
                    }
                    step *= 2.0;
                    if step > 1e6 {
                        return Err(fail());
                    }
                }
            }
        };
        let hi = match arc.ends[1].sigma {
            Some(s) => {
                if self.sign_at(arc, target, s.lo()) != dir {
                    return Err(fail());
                }
                s.lo()
            }
            None => {
                let start = inner(&arc.ends[0]).unwrap_or(0.0).max(lo);
                let mut step = 1.0;
                loop {
                    let p = start + step;
                    if self.sign_at(arc, target, p) == dir {
                        break p;
                    }
                    step *= 2.0;
                    if step > 1e6 {
                        return Err(fail());
                    }
                }
            }
        };
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..400 {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            match self.sign_at(arc, target, m) * dir {
                -1 => lo = m,
                1 => hi = m,
                _ => {
                    let (a, b) = (0.5 * (lo + m), 0.5 * (m + hi));
                    let mut moved = false;
                    if a > lo && self.sign_at(arc, target, a) * dir == -1 {
                        lo = a;
                        moved = true;
                    }
                    if b < hi && self.sign_at(arc, target, b) * dir == 1 {
                        hi = b;
                        moved = true;
                    }
                    if !moved {
                        break;
                    }
                }
            }
        }
        Ok(Interval::new(lo, hi))
    }

    fn crossing_y(&self, arc: usize, target: Interval) -> Result<Interval, ChamberError> {
        let a = &self.arcs[arc];
        let s = self.solve(a, target)?;
        Ok(self.eval(a.cell, 1, s))
    }

    /// Arcs of a quadrant crossing the strip, with their midline `Y`, sorted.
    fn crossings_at(&self, q: [i8; 2], strip: usize, x: Interval) -> Result<Vec<(usize, Interval)>, ChamberError> {
        let out = self.crossings_unsorted(q, strip, x)?;
        for w in out.windows(2) {
            if w[0].1.hi() >= w[1].1.lo() {
                return Err(precision(format!("two crossings near ln|y| = {} at ln|x| = {}", w[0].1, x)));
            }
        }
        Ok(out)
    }

    /// As `crossings_at` without requiring the crossings to be separated
    /// from each other.
    fn crossings_unsorted(
        &self,
        q: [i8; 2],
        strip: usize,
        x: Interval,
    ) -> Result<Vec<(usize, Interval)>, ChamberError> {
        let mut out = Vec::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if a.quadrant != q {
                continue;
            }
            let (lo, hi) = a.span();
            if lo <= strip && hi > strip {
                out.push((i, self.crossing_y(i, x)?));
            }
        }
        out.sort_by(|a, b| a.1.mid().total_cmp(&b.1.mid()));
        Ok(out)
    }

    fn strip_of(&self, side: usize, x: f64) -> Option<usize> {
        let lines = &self.sides[side];
        if lines.iter().any(|l| l.log_x.contains(x)) {
            return None;
        }
        Some(lines.iter().filter(|l| l.log_x.hi() < x).count())
    }

    /// Chamber id of the point with log coordinates `(x, y)` in quadrant `q`.
    fn locate(&self, q: [i8; 2], x: f64, y: f64) -> Result<usize, ChamberError> {
        let side = side_index(q[0]);
        let s = self.strip_of(side, x).ok_or_else(|| precision(format!("ln|x| = {x} is on a strip line")))?;
        let cr = self.crossings_unsorted(q, s, Interval::point(x))?;
        if cr.iter().any(|c| c.1.contains(y)) {
            return Err(precision(format!("point ({x}, {y}) is too close to the curve")));
        }
        let k = cr.iter().filter(|c| c.1.hi() < y).count();
        Ok(self.piece_chamber[&(quadrant_index(q), s, k)])
    }
}

fn midline(lines: &[StripLine], s: usize) -> f64 {
    let n = lines.len();
    if n == 0 {
        0.0
    } else if s == 0 {
        lines[0].log_x.lo() - 1.0
    } else if s == n {
        lines[n - 1].log_x.hi() + 1.0
    } else {
        0.5 * (lines[s - 1].log_x.hi() + lines[s].log_x.lo())
    }
}

fn collect_lines(cc: &ChartedCurve, crit: &CriticalSet, sign: i8) -> Result<Vec<StripLine>, ChamberError> {
    let mut lines = Vec::new();
    for (id, v) in crit.vertical_tangents.iter().enumerate() {
        if v.quadrant[0] == sign {
            lines.push(StripLine { kind: LineKind::VerticalTangent { id }, log_x: v.log_point[0] });
        }
    }
    for (id, n) in crit.nodes.iter().enumerate() {
        if n.quadrant[0] == sign {
            lines.push(StripLine { kind: LineKind::Node { id }, log_x: n.log_point[0] });
        }
    }
    let k = cc.cells.len();
    let x_axis = cc.axis(0);
    for (r, b) in cc.breakpoints.iter().enumerate() {
        let before = &cc.cells[(r + k - 1) % k];
        if b.exps[0].is_zero() && before.quadrant[0] == sign {
            let log_x = before.log_value(&x_axis, Interval::point(1.0));
            lines.push(StripLine { kind: LineKind::AxisLimit { breakpoint: r }, log_x });
        }
    }
    for (id, p) in crit.isolated.iter().enumerate() {
        if p.quadrant[0] == sign {
            let x = p.point[0].abs().ln();
            let r = 1e-9 * (1.0 + x.abs());
            lines.push(StripLine { kind: LineKind::Isolated { id }, log_x: Interval::new(x - r, x + r) });
        }
    }
    lines.sort_by(|a, b| a.log_x.mid().total_cmp(&b.log_x.mid()));
    for w in lines.windows(2) {
        if w[0].log_x.hi() >= w[1].log_x.lo() {
            return Err(precision(format!(
                "strip lines {:?} and {:?} are not separated at ln|x| = {}",
                w[0].kind, w[1].kind, w[0].log_x
            )));
        }
    }
    Ok(lines)
}

fn line_of(lines: &[StripLine], kind: LineKind) -> usize {
    1 + lines.iter().position(|l| l.kind == kind).expect("every critical feature has a line")
}

fn build_arcs(cc: &ChartedCurve, crit: &CriticalSet, sides: &[Vec<StripLine>]) -> Result<Vec<Arc>, ChamberError> {
    let mut arcs = Vec::new();
    for cell in &cc.cells {
        let lines = &sides[side_index(cell.quadrant[0])];
        let n = lines.len();
        let break_end = |r: usize| {
            let e = &cc.breakpoints[r].exps;
            let y_limit = if e[1] > Rational::zero() {
                Some(Value::Bottom)
            } else if e[1] < Rational::zero() {
                Some(Value::Top)
            } else {
                None
            };
            let line = if e[0] > Rational::zero() {
                0
            } else if e[0] < Rational::zero() {
                n + 1
            } else {
                line_of(lines, LineKind::AxisLimit { breakpoint: r })
            };
            let value = y_limit;
            ArcEnd { sigma: None, line, value }
        };
        let mut vts: Vec<(usize, Interval)> = crit
            .vertical_tangents
            .iter()
            .enumerate()
            .filter(|(_, v)| v.cell == cell.index)
            .map(|(id, v)| (id, v.t))
            .collect();
        vts.sort_by(|a, b| a.1.mid().total_cmp(&b.1.mid()));
        let mut ends = vec![break_end(cell.start)];
        for &(id, t) in &vts {
            let v = &crit.vertical_tangents[id];
            let line = line_of(lines, LineKind::VerticalTangent { id });
            ends.push(ArcEnd {
                sigma: Some(sigma_of_t(t)),
                line,
                value: Some(Value::At(PointKey::Vt(id), v.log_point[1])),
            });
        }
        ends.push(break_end(cell.end));
        for w in ends.windows(2) {
            arcs.push(Arc {
                cell: cell.index,
                quadrant: cell.quadrant,
                ends: [w[0].clone(), w[1].clone()],
                nodes: vec![],
            });
        }
    }
    // attach nodes to the arcs through them
    for (id, node) in crit.nodes.iter().enumerate() {
        for (c, t) in [(node.cells.0, node.t), (node.cells.1, node.u)] {
            let s = sigma_of_t(t);
            let hit: Vec<usize> = arcs
                .iter()
                .enumerate()
                .filter(|(_, a)| a.cell == c)
                .filter(|(_, a)| {
                    let after_lo = a.ends[0].sigma.is_none_or(|e| e.hi() < s.lo());
                    let before_hi = a.ends[1].sigma.is_none_or(|e| s.hi() < e.lo());
                    after_lo && before_hi
                })
                .map(|(i, _)| i)
                .collect();
            match hit.as_slice() {
                [i] => arcs[*i].nodes.push(id),
                _ => return Err(precision(format!("node {id} is not separated from a vertical tangent"))),
            }
        }
    }
    Ok(arcs)
}

/// Builds the chamber atlas. Unresolved node boxes make the decomposition
/// unreliable and are reported as `PrecisionExhausted`.
pub fn build_atlas(
    curve: &ReducedCurve,
    critical: CriticalSet,
    opts: &AtlasOptions,
) -> Result<ChamberAtlas, ChamberError> {
    if !critical.unresolved.is_empty() {
        return Err(ChamberError::PrecisionExhausted {
            what: format!("{} node boxes unresolved", critical.unresolved.len()),
            boxes: critical.unresolved.clone(),
        });
    }
    let cc = ChartedCurve::new(curve)?;
    let sides = vec![collect_lines(&cc, &critical, 1)?, collect_lines(&cc, &critical, -1)?];
    let arcs = build_arcs(&cc, &critical, &sides)?;
    let mut geo = Geometry {
        mirrors: cc.cells.iter().map(Cell::mirror).collect(),
        axes: vec![cc.axis(0), cc.axis(1)],
        cc: Some(cc),
        sides,
        arcs,
        node_y: critical.nodes.iter().map(|n| n.log_point[1]).collect(),
        strip_arcs: HashMap::new(),
        piece_chamber: HashMap::new(),
    };

    // pieces of every strip, numbered globally
    let mut piece_ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut piece_list: Vec<(usize, usize, usize)> = Vec::new();
    for (qi, &q) in QUADRANTS.iter().enumerate() {
        let side = side_index(q[0]);
        let n = geo.sides[side].len();
        for s in 0..=n {
            let x = midline(&geo.sides[side], s);
            let cr = geo.crossings_at(q, s, Interval::point(x))?;
            for k in 0..=cr.len() {
                piece_ids.insert((qi, s, k), piece_list.len());
                piece_list.push((qi, s, k));
            }
            geo.strip_arcs.insert((qi, s), cr);
        }
    }

    // value of each arc on each strip line it reaches
    let mut values: HashMap<(usize, usize), Value> = HashMap::new();
    let mut value_at = |geo: &Geometry, arc: usize, l: usize| -> Result<Value, ChamberError> {
        if let Some(v) = values.get(&(arc, l)) {
            return Ok(*v);
        }
        let a = &geo.arcs[arc];
        let lines = &geo.sides[side_index(a.quadrant[0])];
        let v = if let Some(e) = a.ends.iter().find(|e| e.line == l) {
            e.value.expect("finite lines carry values")
        } else if let Some(&id) = a.nodes.iter().find(|&&id| line_of(lines, LineKind::Node { id }) == l) {
            Value::At(PointKey::Node(id), geo.node_y[id])
        } else {
            Value::At(PointKey::Crossing(arc, l), geo.crossing_y(arc, lines[l - 1].log_x)?)
        };
        values.insert((arc, l), v);
        Ok(v)
    };

    let mut uf = UnionFind((0..piece_list.len()).collect());
    let mut top_touch: HashMap<(usize, usize, usize), bool> = HashMap::new();
    for (qi, &q) in QUADRANTS.iter().enumerate() {
        let n = geo.sides[side_index(q[0])].len();
        for l in 1..=n {
            let trace = |s: usize, values: &mut dyn FnMut(usize) -> Result<Value, ChamberError>| {
                let arcs: Vec<usize> = geo.strip_arcs[&(qi, s)].iter().map(|c| c.0).collect();
                let mut v = vec![Value::Bottom];
                for a in arcs {
                    v.push(values(a)?);
                }
                v.push(Value::Top);
                Ok::<_, ChamberError>(v)
            };
            let left = trace(l - 1, &mut |a| value_at(&geo, a, l))?;
            let right = trace(l, &mut |a| value_at(&geo, a, l))?;
            let cmp = |a: &Value, b: &Value| {
                less(a, b).ok_or_else(|| precision(format!("trace values {a:?} and {b:?} on a line are not separated")))
            };
            for kl in 0..left.len() - 1 {
                for kr in 0..right.len() - 1 {
                    let open = cmp(&left[kl], &left[kl + 1])?
                        && cmp(&right[kr], &right[kr + 1])?
                        && cmp(&left[kl], &right[kr + 1])?
                        && cmp(&right[kr], &left[kl + 1])?;
                    if open {
                        uf.union(piece_ids[&(qi, l - 1, kl)], piece_ids[&(qi, l, kr)]);
                    }
                }
            }
            // upper arcs going to Y = +inf at this line make the piece below unbounded
            for (s, trace) in [(l - 1, &left), (l, &right)] {
                for k in 0..trace.len() - 1 {
                    if matches!(trace[k + 1], Value::Top) {
                        top_touch.insert((qi, s, k), true);
                    }
                }
            }
        }
    }

    // chambers in order of first piece
    let mut root_to_chamber: HashMap<usize, usize> = HashMap::new();
    let mut chamber_quadrant: Vec<[i8; 2]> = Vec::new();
    let mut chamber_pieces: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for (pid, &(qi, s, k)) in piece_list.iter().enumerate() {
        let r = uf.find(pid);
        let c = *root_to_chamber.entry(r).or_insert_with(|| {
            chamber_quadrant.push(QUADRANTS[qi]);
            chamber_pieces.push(Vec::new());
            chamber_quadrant.len() - 1
        });
        chamber_pieces[c].push((qi, s, k));
        geo.piece_chamber.insert((qi, s, k), c);
    }

    let topo_unbounded: Vec<bool> = chamber_pieces
        .iter()
        .map(|ps| {
            ps.iter().any(|&(qi, s, k)| {
                let n = geo.sides[side_index(QUADRANTS[qi][0])].len();
                let c = geo.strip_arcs[&(qi, s)].len();
                let upper_escapes = s == 0
                    && k < c
                    && geo.arcs[geo.strip_arcs[&(qi, s)][k].0]
                        .ends
                        .iter()
                        .any(|e| e.line == 0 && matches!(e.value, Some(Value::Top)));
                s == n || k == c || upper_escapes || top_touch.contains_key(&(qi, s, k))
            })
        })
        .collect();
    let sectors = count_sectors(&geo, &chamber_quadrant)?;

    let mut components = Vec::new();
    for c in 0..chamber_quadrant.len() {
        let q = chamber_quadrant[c];
        let label_q = [q[0] * opts.chamber_signs[0], q[1] * opts.chamber_signs[1]];
        let rep = representative(&geo, c, &chamber_pieces[c], opts.chamber_signs, 0.5)?;
        let bounded = !(topo_unbounded[c] && sectors[c] > 0);
        components.push(Chamber {
            id: c,
            quadrant: q,
            label: quadrant_label(label_q),
            rep,
            bounded,
            topologically_bounded: !topo_unbounded[c],
            sectors: sectors[c],
            pieces: chamber_pieces[c].len(),
        });
    }

    let census = QUADRANTS
        .iter()
        .map(|&q| {
            let here: Vec<&Chamber> = components.iter().filter(|c| c.quadrant == q).collect();
            let label_q = [q[0] * opts.chamber_signs[0], q[1] * opts.chamber_signs[1]];
            QuadrantCensus {
                quadrant: q,
                label: quadrant_label(label_q),
                chambers: here.len(),
                bounded: here.iter().filter(|c| c.bounded).count(),
                unbounded: here.iter().filter(|c| !c.bounded).count(),
                topologically_unbounded: here.iter().filter(|c| !c.topologically_bounded).count(),
            }
        })
        .collect();

    let mut strips = Vec::new();
    for (qi, &q) in QUADRANTS.iter().enumerate() {
        let lines = &geo.sides[side_index(q[0])];
        let n = lines.len();
        for s in 0..=n {
            let cr = &geo.strip_arcs[&(qi, s)];
            strips.push(Strip {
                quadrant: q,
                index: s,
                log_x: [(s > 0).then(|| lines[s - 1].log_x.mid()), (s < n).then(|| lines[s].log_x.mid())],
                midline: midline(lines, s),
                crossings: cr.iter().map(|c| [c.1.lo(), c.1.hi()]).collect(),
                pieces: (0..=cr.len()).map(|k| geo.piece_chamber[&(qi, s, k)]).collect(),
            });
        }
    }

    Ok(ChamberAtlas {
        chamber_signs: opts.chamber_signs,
        sides: [1i8, -1].iter().map(|&sign| Side { sign, lines: geo.sides[side_index(sign)].clone() }).collect(),
        refinement_pieces: piece_list.len(),
        strips,
        components,
        census,
        critical,
        geometry: geo,
    })
}

/// For each chamber, the number of asymptotic sectors of the log plane it
/// contains. Branches leave every breakpoint in direction `-e_r`; between two
/// consecutive branch directions of a quadrant, far points all lie in one
/// chamber.
fn count_sectors(geo: &Geometry, chamber_quadrant: &[[i8; 2]]) -> Result<Vec<usize>, ChamberError> {
    let cc = geo.cc();
    let mut out = vec![0; chamber_quadrant.len()];
    for &q in &QUADRANTS {
        let mut angles: Vec<f64> = Vec::new();
        for cell in cc.cells.iter().filter(|c| c.quadrant == q) {
            for r in [cell.start, cell.end] {
                let d = cc.breakpoints[r].direction();
                angles.push(d[1].atan2(d[0]));
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let bisectors: Vec<f64> = match angles.len() {
            0 => vec![0.0],
            1 => vec![angles[0] + std::f64::consts::PI],
            n => (0..n)
                .map(|i| {
                    let a = angles[i];
                    let b = if i + 1 < n { angles[i + 1] } else { angles[0] + 2.0 * std::f64::consts::PI };
                    0.5 * (a + b)
                })
                .collect(),
        };
        let scale = far_scale(geo, q);
        for phi in bisectors {
            let at = |r: f64| geo.locate(q, r * phi.cos(), r * phi.sin());
            let c = at(scale)?;
            if at(4.0 * scale)? != c {
                return Err(precision(format!("sector at angle {phi} is not stable at radius {scale}")));
            }
            out[c] += 1;
        }
    }
    Ok(out)
}

/// A radius beyond all critical data of the quadrant.
fn far_scale(geo: &Geometry, q: [i8; 2]) -> f64 {
    let qi = quadrant_index(q);
    let mut m: f64 = 1.0;
    for l in &geo.sides[side_index(q[0])] {
        m = m.max(l.log_x.mid().abs());
    }
    for ((i, _), cr) in &geo.strip_arcs {
        if *i == qi {
            for c in cr {
                m = m.max(c.1.mid().abs());
            }
        }
    }
    64.0 * m
}

/// Shortest decimal rational near `v` accepted by `ok`.
fn rationalize(v: f64, ok: impl Fn(f64) -> bool) -> Rational {
    for digits in 1..17 {
        let s = format!("{v:.digits$e}");
        if let Ok(r) = parse_rational(&s) {
            if ok(to_f64(&r)) {
                return r;
            }
        }
    }
    from_f64(v)
}

/// A point of the chamber in one of its pieces: on the midline of the strip,
/// at fraction `frac` between the neighbouring crossings.
fn point_in_piece(geo: &Geometry, (qi, s, k): (usize, usize, usize), frac: f64) -> (f64, f64) {
    let q = QUADRANTS[qi];
    let x = midline(&geo.sides[side_index(q[0])], s);
    let cr = &geo.strip_arcs[&(qi, s)];
    let below = (k > 0).then(|| cr[k - 1].1.hi());
    let above = (k < cr.len()).then(|| cr[k].1.lo());
    let y = match (below, above) {
        (Some(a), Some(b)) => a + frac * (b - a),
        (Some(a), None) => a + 1.0 + 4.0 * frac,
        (None, Some(b)) => b - 1.0 - 4.0 * (1.0 - frac),
        (None, None) => 8.0 * (frac - 0.5),
    };
    (x, y)
}

fn representative(
    geo: &Geometry,
    chamber: usize,
    pieces: &[(usize, usize, usize)],
    signs: [i8; 2],
    frac: f64,
) -> Result<[Rational; 2], ChamberError> {
    // prefer interior strips, whose midlines are not arbitrary
    let piece = pieces
        .iter()
        .copied()
        .find(|&(qi, s, _)| s > 0 && s < geo.sides[side_index(QUADRANTS[qi][0])].len())
        .unwrap_or(pieces[0]);
    rational_point(geo, chamber, piece, signs, frac)
}

fn rational_point(
    geo: &Geometry,
    chamber: usize,
    piece: (usize, usize, usize),
    signs: [i8; 2],
    frac: f64,
) -> Result<[Rational; 2], ChamberError> {
    let q = QUADRANTS[piece.0];
    let (x, y) = point_in_piece(geo, piece, frac);
    let cx = f64::from(q[0] * signs[0]) * x.exp();
    let cy = f64::from(q[1] * signs[1]) * y.exp();
    let rx = rationalize(cx, |v| geo.locate(q, v.abs().ln(), y).ok() == Some(chamber));
    let lx = to_f64(&rx).abs().ln();
    let ry = rationalize(cy, |v| geo.locate(q, lx, v.abs().ln()).ok() == Some(chamber));
    let found = geo.locate(q, lx, to_f64(&ry).abs().ln())?;
    if found != chamber {
        return Err(precision(format!("representative of chamber {chamber} left its piece")));
    }
    Ok([rx, ry])
}

impl ChamberAtlas {
    /// Chamber containing the point given in chamber coordinates, if it is
    /// off the curve and the coordinate axes.
    pub fn locate(&self, point: [f64; 2]) -> Result<Option<usize>, ChamberError> {
        if point[0] == 0.0 || point[1] == 0.0 {
            return Ok(None);
        }
        let q = [0, 1].map(|j| if point[j] * f64::from(self.chamber_signs[j]) > 0.0 { 1 } else { -1 });
        self.geometry.locate(q, point[0].abs().ln(), point[1].abs().ln()).map(Some)
    }

    /// Up to `count` rational points of the chamber besides its representative,
    /// spread over its pieces.
    pub fn samples(&self, chamber: usize, count: usize) -> Result<Vec<[Rational; 2]>, ChamberError> {
        let pieces: Vec<(usize, usize, usize)> = {
            let mut v: Vec<_> =
                self.geometry.piece_chamber.iter().filter(|(_, &c)| c == chamber).map(|(p, _)| *p).collect();
            v.sort();
            v
        };
        let mut out = Vec::new();
        let fracs = [0.25, 0.75, 0.5, 0.125, 0.875];
        'outer: for &f in &fracs {
            for &p in &pieces {
                if out.len() >= count {
                    break 'outer;
                }
                let r = rational_point(&self.geometry, chamber, p, self.chamber_signs, f)?;
                if r != self.components[chamber].rep && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    pub fn quadrant(&self, label: &str) -> Option<&QuadrantCensus> {
        self.census.iter().find(|c| c.label == label)
    }

    /// Census ordered `++, -+, --, +-` by chamber-coordinate label.
    pub fn census_by_label(&self) -> Vec<&QuadrantCensus> {
        let order = ["++", "-+", "--", "+-"];
        let mut v: Vec<&QuadrantCensus> = self.census.iter().collect();
        v.sort_by(|a, b| {
            let ia = order.iter().position(|o| *o == a.label);
            let ib = order.iter().position(|o| *o == b.label);
            ia.cmp(&ib)
        });
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::NodeOptions;
    use crate::testing::haas;

    fn haas_atlas() -> ChamberAtlas {
        let c = haas();
        let crit = CriticalSet::compute(&c, &NodeOptions::default()).unwrap();
        build_atlas(&c, crit, &AtlasOptions { chamber_signs: [-1, -1] }).unwrap()
    }

    #[test]
    fn haas_census() {
        let a = haas_atlas();
        for q in a.census_by_label() {
            eprintln!("{q:?}");
        }
        let pos = a.quadrant("++").unwrap();
        assert_eq!((pos.chambers, pos.unbounded, pos.bounded), (15, 5, 10));
        assert_eq!(pos.topologically_unbounded, 7);
        assert_eq!(a.quadrant("--").unwrap().chambers, 1);
        assert_eq!(a.quadrant("+-").unwrap().chambers, 2);
        assert_eq!(a.quadrant("-+").unwrap().chambers, 2);
        assert_eq!(a.refinement_pieces, 125);
    }

    #[test]
    fn representatives_locate_back() {
        let a = haas_atlas();
        for c in &a.components {
            let p = [to_f64(&c.rep[0]), to_f64(&c.rep[1])];
            assert_eq!(a.locate(p).unwrap(), Some(c.id));
            for s in a.samples(c.id, 3).unwrap() {
                assert_eq!(a.locate([to_f64(&s[0]), to_f64(&s[1])]).unwrap(), Some(c.id));
            }
        }
    }
}
