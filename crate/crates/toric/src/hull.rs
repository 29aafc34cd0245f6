use num_integer::Integer;
use serde::Serialize;

use crate::error::ToricError;
use crate::supports::SupportConfig;

/// A facet of `conv(A)`: outward primitive normal `u` with `u . p <= offset`
/// on `A`, and the points attaining equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub facets: Vec<Facet>,
    /// Every facet holds exactly `n` points of the configuration.
    pub generic: bool,
}

fn dot(u: &[i64], p: &[i64]) -> i64 {
    u.iter().zip(p).map(|(a, b)| a * b).sum()
}

fn sub(p: &[i64], q: &[i64]) -> Vec<i64> {
    p.iter().zip(q).map(|(a, b)| a - b).collect()
}

fn candidate_normals(pts: &[Vec<i64>], n: usize) -> Vec<(Vec<i64>, usize)> {
    let m = pts.len();
    let mut out = Vec::new();
    match n {
        1 => {
            for i in 0..m {
                out.push((vec![1], i));
                out.push((vec![-1], i));
            }
        }
        2 => {
            for i in 0..m {
                for j in i + 1..m {
                    let d = sub(&pts[j], &pts[i]);
                    out.push((vec![-d[1], d[0]], i));
                }
            }
        }
        _ => {
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let a = sub(&pts[j], &pts[i]);
                        let b = sub(&pts[k], &pts[i]);
                        let c = vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                        out.push((c, i));
                    }
                }
            }
        }
    }
    out
}

/// Enumerates the facets of `conv(A)` for `n <= 3` by testing every
/// hyperplane through `n` points for the supporting property, and reports
/// whether each facet holds exactly `n` points.
pub fn genericity_check(config: &SupportConfig) -> Result<FacetReport, ToricError> {
    let n = config.n;
    if n == 0 || n > 3 {
        return Err(ToricError::UnsupportedDimension(n));
    }
    let pts = &config.points;
    let diffs: Vec<Vec<i64>> = pts.iter().map(|p| sub(p, &pts[0])).collect();
    let rank = fewroots_core::IntMatrix::from_rows(&diffs).expect("rectangular").rank();
    if rank < n {
        return Err(ToricError::DegenerateHull);
    }
    let mut facets: Vec<Facet> = Vec::new();
    for (u, base) in candidate_normals(pts, n) {
        if u.iter().all(|&x| x == 0) {
            continue;
        }
        let g = u.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let u: Vec<i64> = u.iter().map(|x| x / g).collect();
        let c = dot(&u, &pts[base]);
        let vals: Vec<i64> = pts.iter().map(|p| dot(&u, p)).collect();
        let (u, c) = if vals.iter().all(|&v| v <= c) {
            (u, c)
        } else if vals.iter().all(|&v| v >= c) {
            (u.iter().map(|x| -x).collect(), -c)
        } else {
            continue;
        };
        if facets.iter().any(|f| f.normal == u) {
            continue;
        }
        let on: Vec<usize> = pts.iter().enumerate().filter(|(_, p)| dot(&u, p) == c).map(|(i, _)| i).collect();
        facets.push(Facet { normal: u, offset: c, points: on });
    }
    facets.sort_by(|a, b| a.points.cmp(&b.points).then(a.normal.cmp(&b.normal)));
    let generic = facets.iter().all(|f| f.points.len() == n);
    Ok(FacetReport { facets, generic })
}
