use fewroots_core::matrix::lattice_index;
use fewroots_core::IntMatrix;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::ToricError;

/// A finite point configuration in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportConfig {
    pub n: usize,
    pub points: Vec<Vec<i64>>,
    /// Set once the first point is the origin and the remaining points
    /// generate `Z^n`.
    #[serde(default)]
    pub normalized: bool,
    /// Vector subtracted from every input point during normalization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<i64>>,
}

impl SupportConfig {
    pub fn new(n: usize, points: Vec<Vec<i64>>) -> Result<Self, ToricError> {
        let c = SupportConfig { n, points, normalized: false, translation: None };
        c.validate()?;
        Ok(c)
    }

    pub fn from_json(s: &str) -> Result<Self, ToricError> {
        let c: SupportConfig = serde_json::from_str(s).map_err(|e| ToricError::Input(e.to_string()))?;
        let c = SupportConfig { normalized: false, translation: None, ..c };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ToricError> {
        if self.points.is_empty() {
            return Err(ToricError::Empty);
        }
        for (index, p) in self.points.iter().enumerate() {
            if p.len() != self.n {
                return Err(ToricError::PointDimension { index, expected: self.n, found: p.len() });
            }
        }
        for i in 0..self.points.len() {
            if self.points[i + 1..].contains(&self.points[i]) {
                return Err(ToricError::RepeatedPoint);
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The `n x m` matrix whose columns are the points.
    pub fn matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.n).map(|r| self.points.iter().map(|p| p[r]).collect()).collect();
        IntMatrix::from_rows(&rows).expect("rectangular")
    }

    /// Translates so that the lexicographically smallest point becomes the
    /// origin and moves it to the front; other points keep their order.
    pub fn normalize(&self) -> Result<SupportConfig, ToricError> {
        let origin =
            (0..self.points.len()).min_by(|&i, &j| self.points[i].cmp(&self.points[j])).ok_or(ToricError::Empty)?;
        self.with_origin(origin)
    }

    /// Like [`normalize`](Self::normalize) but with an explicit choice of
    /// which point becomes the origin.
    pub fn with_origin(&self, origin: usize) -> Result<SupportConfig, ToricError> {
        self.validate()?;
        if origin >= self.points.len() {
            return Err(ToricError::Input(format!("origin index {origin} out of range")));
        }
        let o = self.points[origin].clone();
        let mut order = vec![origin];
        order.extend((0..self.points.len()).filter(|&i| i != origin));
        let points: Vec<Vec<i64>> =
            order.iter().map(|&i| self.points[i].iter().zip(&o).map(|(a, b)| a - b).collect()).collect();
        check_generating(self.n, &points[1..])?;
        let prior = self.translation.clone().unwrap_or_else(|| vec![0; self.n]);
        let translation = prior.iter().zip(&o).map(|(a, b)| a + b).collect();
        Ok(SupportConfig { n: self.n, points, normalized: true, translation: Some(translation) })
    }
}

fn check_generating(n: usize, rest: &[Vec<i64>]) -> Result<(), ToricError> {
    if n == 0 {
        return Ok(());
    }
    if rest.is_empty() {
        return Err(ToricError::NotFullRank);
    }
    let m = IntMatrix::from_rows(rest).expect("rectangular");
    match lattice_index(&m) {
        None => Err(ToricError::NotFullRank),
        Some(idx) if idx.is_one() => Ok(()),
        Some(idx) => Err(ToricError::NotGenerating { index: idx.to_string() }),
    }
}

/// A Cayley configuration together with the parts it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyConfig {
    pub parts: Vec<SupportConfig>,
    pub embedded: SupportConfig,
}

impl CayleyConfig {
    /// Recovers part `k` from the embedded points by reading the indicator
    /// coordinates.
    pub fn project_part(&self, k: usize) -> Vec<Vec<i64>> {
        let n = self.parts[0].n;
        self.embedded
            .points
            .iter()
            .filter(|p| {
                let tag = &p[n..];
                if k == 0 {
                    tag.iter().all(|&t| t == 0)
                } else {
                    tag[k - 1] == 1
                }
            })
            .map(|p| p[..n].to_vec())
            .collect()
    }
}

/// Embeds `k` supports in `Z^n` into `Z^(n+k-1)`: part 1 gets the zero tag,
/// part `i > 1` gets the unit vector `e_(i-1)` in the extra coordinates.
pub fn cayley_embed(parts: &[SupportConfig]) -> Result<CayleyConfig, ToricError> {
    let first = parts.first().ok_or(ToricError::Empty)?;
    let n = first.n;
    if parts.iter().any(|p| p.n != n) {
        return Err(ToricError::MixedDimension);
    }
    let k = parts.len();
    let mut points = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        for p in &part.points {
            let mut q = p.clone();
            q.extend((1..k).map(|t| i64::from(t == i)));
            points.push(q);
        }
    }
    let embedded = SupportConfig::new(n + k - 1, points)?;
    Ok(CayleyConfig { parts: parts.to_vec(), embedded })
}

#[derive(Deserialize)]
struct SystemJson {
    system: Vec<PolyJson>,
}

#[derive(Deserialize)]
struct PolyJson {
    exponents: Vec<Vec<i64>>,
}

/// Reads `{"system": [{"exponents": [...], "coefficients": [...]}, ...]}` and
/// returns the Cayley configuration of the supports. Coefficients are ignored.
pub fn cayley_from_system_json(s: &str) -> Result<CayleyConfig, ToricError> {
    let sys: SystemJson = serde_json::from_str(s).map_err(|e| ToricError::Input(e.to_string()))?;
    let parts = sys
        .system
        .into_iter()
        .map(|p| {
            let n = p.exponents.first().map_or(0, Vec::len);
            SupportConfig::new(n, p.exponents)
        })
        .collect::<Result<Vec<_>, _>>()?;
    cayley_embed(&parts)
}
