//! Real roots of `H_(a,b,d)` per open quadrant.
//!
//! The `y`-resultant is isolated exactly in `x`. At each real `x` root the
//! real roots of `h1(x, .)` are isolated exactly, pairs that nearly satisfy
//! `h2` are polished by Newton's method and alpha-certified, and certified
//! roots are kept only when their `2 beta` balls are pairwise disjoint. The
//! origin is always a root and is not counted.

use fewroots_certify::alpha::{newton_f64, newton_step, short_rational};
use fewroots_certify::{certify_distinct, certify_point, AlphaCertificate, SparseSystem};
use fewroots_core::bipoly::resultant;
use fewroots_core::rational::{pow2, round_down, to_f64};
use fewroots_core::{Rational, SturmSequence, UniPoly, Var};
use num_traits::Zero;
use serde::Serialize;

use crate::error::HaasError;
use crate::system::HaasSystem;

/// Root counts in the order `++, -+, --, +-` of `(sign x, sign y)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct QuadrantSignature(pub [usize; 4]);

impl QuadrantSignature {
    pub const LABELS: [&'static str; 4] = ["++", "-+", "--", "+-"];

    pub fn slot(x: f64, y: f64) -> usize {
        match (x > 0.0, y > 0.0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn positive(&self) -> usize {
        self.0[0]
    }

    /// Signature of the system with `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        let [pp, mp, mm, pm] = self.0;
        QuadrantSignature([pp, pm, mm, mp])
    }
}

impl std::fmt::Display for QuadrantSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedRoot {
    pub point: [f64; 2],
    pub quadrant: &'static str,
    pub certificate: AlphaCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootCount {
    pub signature: QuadrantSignature,
    pub roots: Vec<CertifiedRoot>,
    /// `2 beta` balls of all certificates pairwise disjoint.
    pub distinct: bool,
    pub resultant_degree: usize,
    /// Distinct real nonzero roots of the resultant.
    pub real_x_roots: usize,
    /// Real `x` roots of the resultant with no real partner `y`; their
    /// partners are complex.
    pub complex_partners: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    /// Isolating intervals are refined to width `2^-bits`.
    pub bits: u32,
    /// Exact Newton steps tried before a candidate is declared uncertifiable.
    pub max_polish: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { bits: 80, max_polish: 4 }
    }
}

fn strip_origin(mut r: UniPoly) -> UniPoly {
    while !r.is_zero() && r.coeff(0).is_zero() {
        r = r.exact_div(&UniPoly::x());
    }
    r
}

fn real_roots(p: &UniPoly, bits: u32) -> Result<Vec<Rational>, HaasError> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let s = SturmSequence::new(&p.squarefree_part())?;
    let eps = pow2(-i64::from(bits));
    Ok(s.isolate(None)
        .into_iter()
        .map(|mut iv| {
            iv.refine(&eps);
            iv.midpoint()
        })
        .collect())
}

/// Certifies the root near `z`, polishing with exact Newton steps when the
/// first attempt fails.
fn certify_near(f: &SparseSystem, z: [f64; 2], opts: &CountOptions) -> Result<AlphaCertificate, HaasError> {
    let z = newton_f64(f, &z, 50).unwrap_or_else(|| z.to_vec());
    let mut q: Vec<Rational> = z.iter().map(|&v| short_rational(v)).collect();
    for _ in 0..=opts.max_polish {
        let cert = certify_point(f, &q)?;
        if cert.certified {
            return Ok(cert);
        }
        q = newton_step(f, &q)?.iter().map(|v| round_down(v, 4 * opts.bits)).collect();
    }
    Err(HaasError::DegenerateInput(format!("no alpha certificate near ({}, {})", z[0], z[1])))
}

fn same_root(a: &AlphaCertificate, b: &AlphaCertificate) -> bool {
    !certify_distinct(&[a.clone(), b.clone()])
}

pub fn count_roots_quadrants(h: &HaasSystem, opts: &CountOptions) -> Result<RootCount, HaasError> {
    let r = resultant(&h.h1, &h.h2, Var::Y)?;
    if r.is_zero() {
        return Err(HaasError::DegenerateInput("resultant vanishes identically".into()));
    }
    let resultant_degree = r.degree().unwrap_or(0);
    let xs = real_roots(&strip_origin(r), opts.bits)?;
    let f = h.sparse();
    let mut certs: Vec<AlphaCertificate> = Vec::new();
    let mut complex_partners = 0;
    for x in &xs {
        let g1 = h.h1.specialize(Var::X, x);
        let scale = h.h2.terms().map(|(_, c)| to_f64(c).abs()).fold(1.0, f64::max);
        let xf = to_f64(x);
        let mut matched = false;
        for y in real_roots(&g1, opts.bits)? {
            let yf = to_f64(&y);
            let r2 = h.h2.eval(x, &y);
            let size = scale * (1.0 + yf.abs().powi(2 * h.d as i32) + xf.abs().powi(h.d as i32) + xf.abs());
            if to_f64(&r2).abs() > 1e-12 * size {
                continue;
            }
            matched = true;
            let cert = certify_near(&f, [xf, yf], opts)?;
            if !certs.iter().any(|c| same_root(c, &cert)) {
                certs.push(cert);
            }
        }
        if !matched {
            complex_partners += 1;
        }
    }
    let distinct = certify_distinct(&certs);
    let mut signature = QuadrantSignature::default();
    let roots = certs
        .into_iter()
        .map(|c| {
            let p = c.z0_f64();
            let k = QuadrantSignature::slot(p[0], p[1]);
            signature.0[k] += 1;
            CertifiedRoot { point: [p[0], p[1]], quadrant: QuadrantSignature::LABELS[k], certificate: c }
        })
        .collect();
    Ok(RootCount { signature, roots, distinct, resultant_degree, real_x_roots: xs.len(), complex_partners })
}

/// The five approximate positive roots of `H_(44/31, 44/31, 3)`.
pub const FIVE_POINTS: [[&str; 2]; 5] = [
    ["0.584513273807", "0.818672114695"],
    ["0.721441819886", "0.757201442567"],
    ["0.740238978217", "0.740238978217"],
    ["0.757201442567", "0.721441819886"],
    ["0.818672114695", "0.584513273807"],
];

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::{int, rat};

    fn count(a: Rational, b: Rational) -> RootCount {
        let h = HaasSystem::new(a, b, 3).unwrap();
        count_roots_quadrants(&h, &CountOptions::default()).unwrap()
    }

    #[test]
    fn counterexample_has_five_positive_roots() {
        let rc = count(rat(44, 31), rat(44, 31));
        assert_eq!(rc.signature, QuadrantSignature([5, 0, 0, 0]));
        assert!(rc.distinct);
        assert!(rc.roots.iter().all(|r| r.certificate.certified && r.certificate.alpha_ub < 0.03));
        for p in FIVE_POINTS {
            let z = [p[0].parse::<f64>().unwrap(), p[1].parse::<f64>().unwrap()];
            assert!(rc.roots.iter().any(|r| (r.point[0] - z[0]).abs() < 1e-9 && (r.point[1] - z[1]).abs() < 1e-9));
        }
    }

    #[test]
    fn minus_one_has_a_single_root() {
        assert_eq!(count(int(-1), int(-1)).signature, QuadrantSignature([1, 0, 0, 0]));
    }

    #[test]
    fn two_two() {
        let rc = count(int(2), int(2));
        assert_eq!(rc.signature, QuadrantSignature([3, 2, 2, 2]));
        assert!(rc.signature.total() as u32 <= 36);
    }
}
