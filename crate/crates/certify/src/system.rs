use std::collections::BTreeMap;

use fewroots_core::rational::{int, parse_rational, to_f64};
use fewroots_core::{BiPoly, RatMatrix, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CertifyError;

/// A polynomial as a list of `(exponent vector, coefficient)` terms with
/// distinct exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub terms: Vec<(Vec<u32>, Rational)>,
}

/// Taylor coefficients keyed by multi-index.
pub type Taylor = BTreeMap<Vec<u32>, Rational>;

fn binomial(n: u32, k: u32) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int(i64::from(n - i)) / int(i64::from(i + 1));
    }
    r
}

impl SparsePoly {
    pub fn new(terms: Vec<(Vec<u32>, Rational)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        SparsePoly { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (zi, &k) in z.iter().zip(e) {
                    for _ in 0..k {
                        t *= zi;
                    }
                }
                t
            })
            .sum()
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * z.iter().zip(e).map(|(zi, &k)| zi.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn partial(&self, var: usize) -> SparsePoly {
        SparsePoly::new(
            self.terms
                .iter()
                .filter(|(e, _)| e[var] > 0)
                .map(|(e, c)| {
                    let mut d = e.clone();
                    d[var] -= 1;
                    (d, c * int(i64::from(e[var])))
                })
                .collect(),
        )
    }

    /// Coefficients of `h -> p(z + h)`.
    pub fn taylor_at(&self, z: &[Rational]) -> Taylor {
        let mut out: Taylor = BTreeMap::new();
        for (e, c) in &self.terms {
            // expand prod_j (z_j + h_j)^{e_j}
            let mut partial: Vec<(Vec<u32>, Rational)> = vec![(Vec::new(), c.clone())];
            for (j, &ej) in e.iter().enumerate() {
                let mut next = Vec::new();
                for (idx, coef) in &partial {
                    for t in 0..=ej {
                        let mut zpow = Rational::one();
                        for _ in 0..(ej - t) {
                            zpow *= &z[j];
                        }
                        let v = coef * binomial(ej, t) * zpow;
                        if v.is_zero() {
                            continue;
                        }
                        let mut i2 = idx.clone();
                        i2.push(t);
                        next.push((i2, v));
                    }
                }
                partial = next;
            }
            for (idx, v) in partial {
                *out.entry(idx).or_insert_with(Rational::zero) += v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// A system of sparse polynomials in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSystem {
    pub nvars: usize,
    pub polys: Vec<SparsePoly>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum CoefJson {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Deserialize, Serialize)]
struct PolyJson {
    exponents: Vec<Vec<u32>>,
    coefficients: Vec<CoefJson>,
}

#[derive(Deserialize, Serialize)]
struct SystemJson {
    system: Vec<PolyJson>,
}

impl SparseSystem {
    pub fn new(nvars: usize, polys: Vec<SparsePoly>) -> Result<Self, CertifyError> {
        for p in &polys {
            if p.terms.iter().any(|(e, _)| e.len() != nvars) {
                return Err(CertifyError::Input("exponent vector of the wrong length".into()));
            }
        }
        Ok(SparseSystem { nvars, polys })
    }

    pub fn is_square(&self) -> bool {
        self.nvars == self.polys.len()
    }

    pub fn require_square(&self) -> Result<(), CertifyError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(CertifyError::NotSquare { vars: self.nvars, polys: self.polys.len() })
        }
    }

    /// Bivariate system from two [`BiPoly`]s, variable order `(x, y)`.
    pub fn from_bipolys(p: &BiPoly, q: &BiPoly) -> Self {
        let conv = |b: &BiPoly| SparsePoly::new(b.terms().map(|(&(i, j), c)| (vec![i, j], c.clone())).collect());
        SparseSystem { nvars: 2, polys: vec![conv(p), conv(q)] }
    }

    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        let sys: SystemJson = serde_json::from_str(s).map_err(|e| CertifyError::Input(e.to_string()))?;
        let nvars = sys.system.first().and_then(|p| p.exponents.first()).map_or(0, Vec::len);
        let mut polys = Vec::new();
        for p in sys.system {
            if p.exponents.len() != p.coefficients.len() {
                return Err(CertifyError::Input("exponents and coefficients differ in length".into()));
            }
            let mut terms = Vec::new();
            for (e, c) in p.exponents.into_iter().zip(p.coefficients) {
                let text = match c {
                    CoefJson::Text(t) => t,
                    CoefJson::Number(n) => n.to_string(),
                };
                terms.push((e, parse_rational(&text)?));
            }
            polys.push(SparsePoly::new(terms));
        }
        SparseSystem::new(nvars, polys)
    }

    pub fn to_json(&self) -> String {
        let sys = SystemJson {
            system: self
                .polys
                .iter()
                .map(|p| PolyJson {
                    exponents: p.terms.iter().map(|(e, _)| e.clone()).collect(),
                    coefficients: p.terms.iter().map(|(_, c)| CoefJson::Text(c.to_string())).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&sys).expect("serializable")
    }

    pub fn eval(&self, z: &[Rational]) -> Vec<Rational> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    pub fn eval_f64(&self, z: &[f64]) -> Vec<f64> {
        self.polys.iter().map(|p| p.eval_f64(z)).collect()
    }

    pub fn jacobian(&self, z: &[Rational]) -> RatMatrix {
        let rows: Vec<Vec<Rational>> =
            self.polys.iter().map(|p| (0..self.nvars).map(|j| p.partial(j).eval(z)).collect()).collect();
        RatMatrix::from_rows(&rows).expect("rectangular")
    }

    pub fn jacobian_f64(&self, z: &[f64]) -> Vec<Vec<f64>> {
        self.polys.iter().map(|p| (0..self.nvars).map(|j| p.partial(j).eval_f64(z)).collect()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(SparsePoly::degree).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fewroots_core::rational::rat;

    #[test]
    fn taylor_of_square() {
        // (z + h)^2 at z = 3: 9 + 6h + h^2
        let p = SparsePoly::new(vec![(vec![2], int(1))]);
        let t = p.taylor_at(&[int(3)]);
        assert_eq!(t[&vec![0]], int(9));
        assert_eq!(t[&vec![1]], int(6));
        assert_eq!(t[&vec![2]], int(1));
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"system": [{"exponents": [[6,0],[0,3],[0,1]], "coefficients": [1, "44/31", -1]},
                               {"exponents": [[0,6],[3,0],[1,0]], "coefficients": [1, 1.5, -1]}]}"#;
        let sys = SparseSystem::from_json(s).unwrap();
        assert_eq!(sys.nvars, 2);
        assert!(sys.polys[1].terms.iter().any(|(_, c)| *c == rat(3, 2)));
        assert_eq!(SparseSystem::from_json(&sys.to_json()).unwrap(), sys);
    }

    #[test]
    fn partials_and_eval() {
        let p = SparsePoly::new(vec![(vec![2, 1], int(3)), (vec![0, 0], int(-1))]);
        assert_eq!(p.eval(&[int(2), int(5)]), int(59));
        assert_eq!(p.partial(0).eval(&[int(2), int(5)]), int(60));
        assert!((p.eval_f64(&[2.0, 5.0]) - 59.0).abs() < 1e-12);
    }
}
