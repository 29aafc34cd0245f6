//! The chamber `E3` of `(a, b)` for which `H_(a,b,3)` has five positive
//! roots: its vertices, the area of their convex hull, and the resulting
//! bound on the probability that Gaussian coefficients land in it.
//!
//! Vertices are the certified nodes and cusps of the discriminant curve that
//! touch `E3`. A node qualifies when some point at distance [`PROBE_RADIUS`]
//! from it locates into the chamber. The region inside a cusp has zero angle,
//! so a cusp is probed once along the axis of its horn, at distance
//! [`CUSP_PROBE_RADIUS`].

use std::f64::consts::{PI, TAU};

use fewroots_chambers::ChamberAtlas;
use fewroots_core::rational::{int, pow2, rat};
use fewroots_core::{Interval, SturmSequence, UniPoly};
use fewroots_toric::ReducedCurve;
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::HaasError;
use crate::system::HaasSystem;

pub const PROBE_RADIUS: f64 = 1e-7;
pub const CUSP_PROBE_RADIUS: f64 = 1e-6;
const DIRECTIONS: usize = 16;

/// Vertex coordinates as printed to ten decimals.
pub const PRINTED_VERTICES: [[f64; 2]; 4] = [
    [1.417_675_949_0, 1.417_675_949_0],
    [1.419_516_797_7, 1.419_516_797_7],
    [1.417_905_105_5, 1.418_214_769_6],
    [1.418_214_769_6, 1.417_905_105_5],
];
pub const VERTEX_TOLERANCE: f64 = 1e-9;

/// The printed probability bound.
pub const PRINTED_PROBABILITY: f64 = 1.936e-9;

/// The printed degree-7 polynomial, constant term first.
pub const PRINTED_C: [i64; 8] = [
    -8_620_460_479_736_328_125,
    2_392_425_241_171_875_000,
    -564_987_948_607_350_000,
    -19_908_809_569_295_316,
    -668_651_015_982_750_336,
    -195_134_969_401_159_896,
    -7_917_064_766_635_392,
    823_564_528_378_596,
];

pub const DENSITY_CONVENTION: &str = "iid standard normal a, b with joint density (2 pi)^-1 exp(-(a^2 + b^2)/2)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Node,
    Cusp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E3Vertex {
    pub kind: VertexKind,
    #[serde(serialize_with = "crate::ser::interval_pair")]
    pub enclosure: [Interval; 2],
    pub printed: [f64; 2],
    /// Largest distance from a printed coordinate to its enclosure.
    pub deviation: f64,
}

impl E3Vertex {
    pub fn mid(&self) -> [f64; 2] {
        self.enclosure.map(|i| i.mid())
    }
}

/// Whether a root of a polynomial reading matches a vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialCheck {
    pub reading: String,
    /// Positive real roots, refined to width `2^-60`.
    pub positive_roots: Vec<[f64; 2]>,
    /// The quantity the polynomial should vanish at.
    #[serde(serialize_with = "crate::ser::interval")]
    pub target: Interval,
    pub vanishes_at_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityBound {
    pub convention: &'static str,
    /// Hull area times the density at the lower left vertex.
    #[serde(serialize_with = "crate::ser::interval")]
    pub bound: Interval,
    /// The same with the prefactor `(2 pi)^-2` in place of `(2 pi)^-1`.
    #[serde(serialize_with = "crate::ser::interval")]
    pub squared_normalisation: Interval,
    pub printed: f64,
    /// `false`: the printed value is below this bound and is not an upper
    /// bound obtainable from the hull area under the stated convention.
    pub printed_reproduced: bool,
    /// The printed value rounds up from the `(2 pi)^-2` variant.
    pub printed_matches_squared_normalisation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E3Geometry {
    pub chamber: usize,
    pub representative: [String; 2],
    /// In counterclockwise order from the lower left vertex.
    pub vertices: Vec<E3Vertex>,
    #[serde(serialize_with = "crate::ser::interval")]
    pub hull_area: Interval,
    pub probability: ProbabilityBound,
    /// The fifth power of the cusp vertex contains `16807/2916`.
    pub cusp_is_fifth_root_of_16807_over_2916: bool,
    /// The printed `C(a)` and `C(-a)` against the fifth power of the
    /// diagonal node vertex.
    pub diagonal_node_checks: Vec<PolynomialCheck>,
    /// Present when coefficients of the degree-36 polynomial were supplied:
    /// its two smallest positive roots against the 35th powers of the
    /// off-diagonal vertex coordinates.
    pub off_diagonal_checks: Option<Vec<PolynomialCheck>>,
}

fn five_root_point() -> [f64; 2] {
    [44.0 / 31.0, 44.0 / 31.0]
}

/// How a critical point is tested for touching a chamber.
#[derive(Debug, Clone, Copy)]
enum Probe {
    Radial,
    /// Unit vector along which the horn of a cusp opens.
    Horn([f64; 2]),
}

fn touches(atlas: &ChamberAtlas, chamber: usize, p: [f64; 2], probe: Probe) -> bool {
    let inside = |q: [f64; 2]| matches!(atlas.locate(q), Ok(Some(c)) if c == chamber);
    match probe {
        Probe::Radial => (0..DIRECTIONS).any(|k| {
            let t = (k as f64 + 0.5) * 2.0 * PI / DIRECTIONS as f64;
            inside([p[0] + PROBE_RADIUS * t.cos(), p[1] + PROBE_RADIUS * t.sin()])
        }),
        Probe::Horn(u) => inside([p[0] + CUSP_PROBE_RADIUS * u[0], p[1] + CUSP_PROBE_RADIUS * u[1]]),
    }
}

/// Both branches leave a cusp along the second difference of the
/// parametrization, so its direction is the axis of the horn.
fn horn_axis(curve: &ReducedCurve, signs: [i8; 2], lambda: f64) -> Option<[f64; 2]> {
    let h = 1e-4 * lambda.abs().max(1.0);
    let q = |x: f64| curve.psi_f64(x).map(|p| [0, 1].map(|j| f64::from(signs[j]) * p[j]));
    let (m, c, p) = (q(lambda - h)?, q(lambda)?, q(lambda + h)?);
    let v = [0, 1].map(|j| m[j] + p[j] - 2.0 * c[j]);
    let n = v[0].hypot(v[1]);
    (n > 0.0).then(|| [v[0] / n, v[1] / n])
}

fn distance_to(i: &Interval, x: f64) -> f64 {
    if i.contains(x) {
        0.0
    } else {
        (i.lo() - x).abs().min((i.hi() - x).abs())
    }
}

/// Critical points of the atlas in the positive quadrant of chamber
/// coordinates, with their enclosures and how to probe them.
fn positive_features(atlas: &ChamberAtlas, curve: &ReducedCurve) -> Vec<(VertexKind, [Interval; 2], Probe)> {
    let s = atlas.chamber_signs;
    let lift = |q: [i8; 2], log: &[Interval; 2]| -> Option<[Interval; 2]> {
        (q[0] * s[0] > 0 && q[1] * s[1] > 0).then(|| log.map(|l| l.exp()))
    };
    let nodes = atlas
        .critical
        .nodes
        .iter()
        .filter_map(|n| Some((VertexKind::Node, lift(n.quadrant, &n.log_point)?, Probe::Radial)));
    let cusps = atlas.critical.cusps().filter_map(|c| {
        Some((VertexKind::Cusp, lift(c.quadrant, &c.log_point)?, Probe::Horn(horn_axis(curve, s, c.lambda)?)))
    });
    nodes.chain(cusps).collect()
}

fn match_printed(kind: VertexKind, enclosure: [Interval; 2], index: usize) -> Result<E3Vertex, HaasError> {
    let mid = enclosure.map(|i| i.mid());
    let printed = *PRINTED_VERTICES
        .iter()
        .min_by(|p, q| {
            let d = |v: &[f64; 2]| (v[0] - mid[0]).hypot(v[1] - mid[1]);
            d(p).total_cmp(&d(q))
        })
        .expect("nonempty");
    let dev = [0, 1].map(|j| distance_to(&enclosure[j], printed[j]));
    if let Some(j) = (0..2).find(|&j| dev[j] > VERTEX_TOLERANCE) {
        return Err(HaasError::VertexMismatch {
            index,
            lo: enclosure[j].lo(),
            hi: enclosure[j].hi(),
            printed: printed[j],
        });
    }
    Ok(E3Vertex { kind, enclosure, printed, deviation: dev[0].max(dev[1]) })
}

/// Shoelace formula relative to the first vertex's midpoint.
fn polygon_area(vs: &[[Interval; 2]]) -> Interval {
    let o = [vs[0][0].mid(), vs[0][1].mid()];
    let d: Vec<[Interval; 2]> =
        vs.iter().map(|v| [v[0] - Interval::point(o[0]), v[1] - Interval::point(o[1])]).collect();
    let mut sum = Interval::point(0.0);
    for i in 0..d.len() {
        let (p, q) = (&d[i], &d[(i + 1) % d.len()]);
        sum = sum + p[0] * q[1] - q[0] * p[1];
    }
    sum.abs().scale(0.5)
}

fn tau() -> Interval {
    Interval::new(TAU.next_down(), TAU.next_up())
}

fn probability(area: Interval, lower_left: &[Interval; 2]) -> ProbabilityBound {
    let r2 = lower_left[0].sqr() + lower_left[1].sqr();
    let density = (r2.scale(-0.5)).exp() / tau();
    let bound = area * density;
    let squared = bound / tau();
    // within one unit of the last printed digit, rounded up
    let rounded_up = squared.hi() <= PRINTED_PROBABILITY && PRINTED_PROBABILITY - squared.lo() < 1e-12;
    ProbabilityBound {
        convention: DENSITY_CONVENTION,
        printed: PRINTED_PROBABILITY,
        printed_reproduced: bound.hi() <= PRINTED_PROBABILITY,
        printed_matches_squared_normalisation: rounded_up,
        bound,
        squared_normalisation: squared,
    }
}

fn polynomial_check(reading: &str, p: &UniPoly, target: Interval) -> Result<PolynomialCheck, HaasError> {
    let sturm = SturmSequence::new(p)?;
    let bound = p.cauchy_bound();
    let mut positive_roots = Vec::new();
    let mut vanishes = false;
    for mut iv in sturm.isolate(Some((&int(0), &bound))) {
        if iv.hi <= int(0) {
            continue;
        }
        iv.refine(&pow2(-60));
        let (lo, hi) = iv.to_f64_bounds();
        vanishes |= Interval::new(lo, hi).overlaps(&target);
        positive_roots.push([lo, hi]);
    }
    Ok(PolynomialCheck { reading: reading.into(), positive_roots, target, vanishes_at_target: vanishes })
}

fn off_diagonal_checks(a: &[BigInt], vertices: &[E3Vertex]) -> Result<Vec<PolynomialCheck>, HaasError> {
    let p = UniPoly::from_bigints(a);
    let coords: Vec<Interval> = {
        let mut v: Vec<Interval> = vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Node && !v.enclosure[0].overlaps(&v.enclosure[1]))
            .map(|v| v.enclosure[0])
            .collect();
        v.sort_by(|x, y| x.mid().total_cmp(&y.mid()));
        v
    };
    coords
        .iter()
        .zip(["smallest positive root of A", "second positive root of A"])
        .map(|(c, label)| polynomial_check(label, &p, c.powi(35)))
        .collect()
}

/// Builds the `d = 3` atlas and extracts `E3`. `a_coefficients` are the
/// coefficients of the degree-36 polynomial, constant term first.
pub fn e3_geometry(a_coefficients: Option<&[BigInt]>) -> Result<E3Geometry, HaasError> {
    let atlas = HaasSystem::atlas(3)?;
    e3_from_atlas(&atlas, a_coefficients)
}

/// `atlas` must be the `d = 3` atlas.
pub fn e3_from_atlas(atlas: &ChamberAtlas, a_coefficients: Option<&[BigInt]>) -> Result<E3Geometry, HaasError> {
    let chamber = atlas
        .locate(five_root_point())?
        .ok_or_else(|| HaasError::DegenerateInput("(44/31, 44/31) lies on the discriminant".into()))?;
    let curve = HaasSystem::curve(3)?;
    let touching: Vec<(VertexKind, [Interval; 2])> = positive_features(atlas, &curve)
        .into_iter()
        .filter(|(_, e, probe)| touches(atlas, chamber, e.map(|i| i.mid()), *probe))
        .map(|(k, e, _)| (k, e))
        .collect();
    if touching.len() != 4 {
        return Err(HaasError::VertexCount(touching.len()));
    }

    let centre = touching.iter().fold([0.0, 0.0], |c, (_, e)| [c[0] + e[0].mid() / 4.0, c[1] + e[1].mid() / 4.0]);
    let angle = |e: &[Interval; 2]| (e[1].mid() - centre[1]).atan2(e[0].mid() - centre[0]);
    let lower_left = touching
        .iter()
        .map(|(_, e)| angle(e))
        .min_by(|x, y| (x + 0.75 * PI).abs().total_cmp(&(y + 0.75 * PI).abs()))
        .expect("four vertices");
    let mut ordered = touching;
    ordered.sort_by(|(_, e), (_, f)| {
        let key = |v: &[Interval; 2]| (angle(v) - lower_left).rem_euclid(TAU);
        key(e).total_cmp(&key(f))
    });
    let vertices: Vec<E3Vertex> =
        ordered.into_iter().enumerate().map(|(i, (k, e))| match_printed(k, e, i)).collect::<Result<_, _>>()?;

    let hull_area = polygon_area(&vertices.iter().map(|v| v.enclosure).collect::<Vec<_>>());
    let probability = probability(hull_area, &vertices[0].enclosure);

    let d_root = Interval::from_rational(&rat(16807, 2916));
    let cusp_ok =
        vertices.iter().any(|v| v.kind == VertexKind::Cusp && v.enclosure.iter().all(|c| c.powi(5).overlaps(&d_root)));

    let node_fifth = vertices[0].enclosure[0].hull(&vertices[0].enclosure[1]).powi(5);
    let c = UniPoly::from_ints(&PRINTED_C);
    let c_neg = c.compose_linear(&int(-1), &int(0));
    let diagonal_node_checks =
        vec![polynomial_check("C(a)", &c, node_fifth)?, polynomial_check("C(-a)", &c_neg, node_fifth)?];
    let off_diagonal_checks = a_coefficients.map(|a| off_diagonal_checks(a, &vertices)).transpose()?;

    let rep = &atlas.components[chamber].rep;
    Ok(E3Geometry {
        chamber,
        representative: [rep[0].to_string(), rep[1].to_string()],
        vertices,
        hull_area,
        probability,
        cusp_is_fifth_root_of_16807_over_2916: cusp_ok,
        diagonal_node_checks,
        off_diagonal_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kite_area_of_printed_vertices() {
        let iv = |p: [f64; 2]| p.map(Interval::point);
        let [l, u, p, q] = PRINTED_VERTICES;
        let area = polygon_area(&[iv(l), iv(p), iv(u), iv(q)]);
        // diagonals are perpendicular: d1 d2 / 2
        let kite = (u[0] - l[0]).hypot(u[1] - l[1]) * (p[0] - q[0]).hypot(p[1] - q[1]) / 2.0;
        assert!((area.mid() - kite).abs() < 1e-15, "{area} vs {kite}");
        assert!(area.lo() > 5.69e-7 && area.hi() < 5.701e-7);
    }

    #[test]
    fn printed_probability_is_the_squared_normalisation() {
        let l = PRINTED_VERTICES[0].map(Interval::point);
        let p = probability(Interval::point(5.7003e-7), &l);
        assert!((p.bound.mid() - 1.2159e-8).abs() < 1e-11, "{}", p.bound);
        assert!(!p.printed_reproduced);
        assert!(p.printed_matches_squared_normalisation, "{}", p.squared_normalisation);
        assert!((p.bound.mid() / p.squared_normalisation.mid() - TAU).abs() < 1e-9);
    }

    #[test]
    fn printed_c_vanishes_at_minus_the_fifth_power() {
        let v = Interval::point(PRINTED_VERTICES[0][0]).powi(5);
        let t = Interval::new(v.lo() - 1e-9, v.hi() + 1e-9);
        let c = UniPoly::from_ints(&PRINTED_C);
        assert!(!polynomial_check("C(a)", &c, t).unwrap().vanishes_at_target);
        let neg = polynomial_check("C(-a)", &c.compose_linear(&int(-1), &int(0)), t).unwrap();
        assert!(neg.vanishes_at_target);
        assert_eq!(neg.positive_roots.len(), 2);
        // the smaller positive root of C(-a)
        assert!((neg.positive_roots[0][0] - 5.726_441_888_66).abs() < 1e-9);
    }
}
