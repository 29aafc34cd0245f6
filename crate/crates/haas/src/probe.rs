//! Emptiness probes for the five-root region at small `d`.
//!
//! For `d = 1` the system has at most four complex roots, which is checked
//! on seeded random parameters. For `d >= 2` every chamber of the atlas is
//! solved at its representative and at a few extra sample points; the
//! signature has to agree across each chamber.

use fewroots_core::rational::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::count::{count_roots_quadrants, CountOptions, QuadrantSignature};
use crate::error::HaasError;
use crate::system::HaasSystem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberSignature {
    pub chamber: usize,
    pub label: String,
    pub bounded: bool,
    pub representative: [String; 2],
    pub signature: QuadrantSignature,
    pub samples: usize,
    /// Every extra sample has the representative's signature.
    pub samples_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub d: u32,
    pub bezout: u32,
    /// Parameter pairs solved, and those skipped as lying on the discriminant.
    pub solved: usize,
    pub skipped: usize,
    pub max_total: usize,
    pub max_positive: usize,
    /// Empty unless `d >= 2`.
    pub chambers: Vec<ChamberSignature>,
    /// No solved system has five positive roots.
    pub five_root_region_empty: bool,
}

pub const DEFAULT_SEED: u64 = 0x4841_4153;

/// Random `(a, b)` with numerators in `[-4000, 4000]` over 1000, nonzero.
pub fn bezout_probe(samples: usize, seed: u64, opts: &CountOptions) -> Result<ProbeReport, HaasError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut solved, mut skipped, mut max_total, mut max_positive) = (0, 0, 0, 0);
    while solved + skipped < samples {
        let mut draw = || loop {
            let n: i64 = rng.gen_range(-4000..=4000);
            if n != 0 {
                break rat(n, 1000);
            }
        };
        let h = HaasSystem::new(draw(), draw(), 1)?;
        match count_roots_quadrants(&h, opts) {
            Ok(rc) => {
                solved += 1;
                max_total = max_total.max(rc.signature.total());
                max_positive = max_positive.max(rc.signature.positive());
            }
            Err(HaasError::DegenerateInput(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(ProbeReport {
        d: 1,
        bezout: 4,
        solved,
        skipped,
        max_total,
        max_positive,
        chambers: Vec::new(),
        five_root_region_empty: max_positive < 5,
    })
}

/// Solves one system per chamber of the `d` atlas plus `extra` samples each.
pub fn chamber_probe(d: u32, extra: usize, opts: &CountOptions) -> Result<ProbeReport, HaasError> {
    let atlas = HaasSystem::atlas(d)?;
    let count = |p: &[fewroots_core::Rational; 2]| -> Result<QuadrantSignature, HaasError> {
        Ok(count_roots_quadrants(&HaasSystem::new(p[0].clone(), p[1].clone(), d)?, opts)?.signature)
    };
    let mut chambers = Vec::with_capacity(atlas.components.len());
    for c in &atlas.components {
        let signature = count(&c.rep)?;
        let samples = atlas.samples(c.id, extra)?;
        let mut agree = true;
        for s in &samples {
            agree &= count(s)? == signature;
        }
        chambers.push(ChamberSignature {
            chamber: c.id,
            label: c.label.clone(),
            bounded: c.bounded,
            representative: [c.rep[0].to_string(), c.rep[1].to_string()],
            signature,
            samples: samples.len(),
            samples_agree: agree,
        });
    }
    let max_total = chambers.iter().map(|c| c.signature.total()).max().unwrap_or(0);
    let max_positive = chambers.iter().map(|c| c.signature.positive()).max().unwrap_or(0);
    Ok(ProbeReport {
        d,
        bezout: 4 * d * d,
        solved: chambers.iter().map(|c| 1 + c.samples).sum(),
        skipped: 0,
        max_total,
        max_positive,
        five_root_region_empty: max_positive < 5,
        chambers,
    })
}

/// `d = 1` by random sampling, larger `d` by the chamber atlas.
pub fn emptiness_probe(d: u32, opts: &CountOptions) -> Result<ProbeReport, HaasError> {
    match d {
        0 => Err(HaasError::BadParameters("d must be positive".into())),
        1 => bezout_probe(200, DEFAULT_SEED, opts),
        _ => chamber_probe(d, 3, opts),
    }
}
