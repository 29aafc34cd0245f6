//! Dense polyline samples of the curve for plotting and raster checks.
//!
//! Each chart cell is sampled uniformly in `sigma = ln(2t)` (first half) and
//! `-ln(2(1-t))` (second half), which spends most samples near the chart ends
//! where the curve runs off to the axes or to infinity.

use fewroots_core::Interval;
use serde::Serialize;

use crate::chart::ChartedCurve;

/// One cell of the curve in log coordinates `(ln|x|, ln|y|)` of its quadrant.
#[derive(Debug, Clone, Serialize)]
pub struct Polyline {
    pub cell: usize,
    pub quadrant: [i8; 2],
    pub log_points: Vec<[f64; 2]>,
}

impl Polyline {
    /// The points in linear coordinates, after multiplying coordinate `j`
    /// by `signs[j]`.
    pub fn points(&self, signs: [i8; 2]) -> Vec<[f64; 2]> {
        let s = [0, 1].map(|j| f64::from(self.quadrant[j] * signs[j]));
        self.log_points.iter().map(|p| [s[0] * p[0].exp(), s[1] * p[1].exp()]).collect()
    }
}

/// `2 * half + 1` samples per cell with `|sigma| <= reach`.
pub fn sample_curve(cc: &ChartedCurve, half: usize, reach: f64) -> Vec<Polyline> {
    let ln2 = std::f64::consts::LN_2;
    let axes = [cc.axis(0), cc.axis(1)];
    cc.cells
        .iter()
        .map(|cell| {
            let mirror = cell.mirror();
            let mut log_points = Vec::with_capacity(2 * half + 1);
            for i in 0..=2 * half {
                let s = reach * (i as f64 / half as f64 - 1.0);
                let p = if s <= 0.0 {
                    axes.each_ref().map(|a| cell.log_value_tau(a, Interval::point(s - ln2)).mid())
                } else {
                    axes.each_ref().map(|a| mirror.log_value_tau(a, Interval::point(-s - ln2)).mid())
                };
                if p[0].is_finite() && p[1].is_finite() {
                    log_points.push(p);
                }
            }
            Polyline { cell: cell.index, quadrant: cell.quadrant, log_points }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::haas;

    #[test]
    fn samples_match_direct_evaluation() {
        let c = haas();
        let cc = ChartedCurve::new(&c).unwrap();
        let lines = sample_curve(&cc, 2, 2.0);
        assert_eq!(lines.len(), cc.cells.len());
        for (l, cell) in lines.iter().zip(&cc.cells) {
            assert_eq!(l.log_points.len(), 5);
            for (i, p) in l.log_points.iter().enumerate() {
                let s = i as f64 - 2.0;
                let t = if s <= 0.0 { s.exp() / 2.0 } else { 1.0 - (-s).exp() / 2.0 };
                let (psi, q) = c.log_abs_psi_f64(cell.lambda_f64(t)).unwrap();
                assert_eq!(q, l.quadrant);
                assert!((p[0] - psi[0]).abs() < 1e-9 && (p[1] - psi[1]).abs() < 1e-9, "{p:?} vs {psi:?}");
            }
        }
    }
}
