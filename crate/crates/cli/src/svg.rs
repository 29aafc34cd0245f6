//! Deterministic SVG rendering of a chamber atlas: shaded chambers, strip
//! lines and the sampled curve, in linear or logarithmic coordinates.

use std::fmt::Write;

use fewroots_chambers::{ChamberAtlas, Polyline};
use thiserror::Error;

const SIZE: f64 = 800.0;
const GRID: usize = 160;
const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#86bcb6", "#d37295",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("empty plot window [{}, {}] x [{}, {}]", .0.x[0], .0.x[1], .0.y[0], .0.y[1])]
    EmptyWindow(Window),
}

/// Plot window; in log coordinates when rendering with `log_scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Window {
    pub fn square(lo: f64, hi: f64) -> Self {
        Window { x: [lo, hi], y: [lo, hi] }
    }

    fn check(&self) -> Result<(), SvgError> {
        let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] < r[1];
        if ok(self.x) && ok(self.y) {
            Ok(())
        } else {
            Err(SvgError::EmptyWindow(*self))
        }
    }

    fn pixel(&self, p: [f64; 2]) -> [f64; 2] {
        [(p[0] - self.x[0]) / (self.x[1] - self.x[0]) * SIZE, (self.y[1] - p[1]) / (self.y[1] - self.y[0]) * SIZE]
    }

    fn contains_loosely(&self, p: [f64; 2]) -> bool {
        let (w, h) = (self.x[1] - self.x[0], self.y[1] - self.y[0]);
        p[0] >= self.x[0] - w && p[0] <= self.x[1] + w && p[1] >= self.y[0] - h && p[1] <= self.y[1] + h
    }
}

/// Plot coordinates of a chamber-coordinate point; `None` off the positive
/// quadrant in log scale.
fn plot_coords(p: [f64; 2], log_scale: bool) -> Option<[f64; 2]> {
    if !log_scale {
        return Some(p);
    }
    (p[0] > 0.0 && p[1] > 0.0).then(|| [p[0].ln(), p[1].ln()])
}

fn from_plot(p: [f64; 2], log_scale: bool) -> [f64; 2] {
    if log_scale {
        [p[0].exp(), p[1].exp()]
    } else {
        p
    }
}

fn shading(out: &mut String, atlas: &ChamberAtlas, w: &Window, log_scale: bool) {
    let cell = SIZE / GRID as f64;
    for r in 0..GRID {
        let y = w.y[1] - (r as f64 + 0.5) / GRID as f64 * (w.y[1] - w.y[0]);
        let mut runs: Vec<(usize, usize, usize)> = Vec::new();
        for c in 0..GRID {
            let x = w.x[0] + (c as f64 + 0.5) / GRID as f64 * (w.x[1] - w.x[0]);
            let Ok(Some(id)) = atlas.locate(from_plot([x, y], log_scale)) else { continue };
            match runs.last_mut() {
                Some((start, len, prev)) if *prev == id && *start + *len == c => *len += 1,
                _ => runs.push((c, 1, id)),
            }
        }
        for (start, len, id) in runs {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.35"/>"#,
                start as f64 * cell,
                r as f64 * cell,
                len as f64 * cell,
                cell,
                PALETTE[id % PALETTE.len()]
            );
        }
    }
}

fn strip_lines(out: &mut String, atlas: &ChamberAtlas, w: &Window, log_scale: bool) {
    for side in &atlas.sides {
        let sign = f64::from(side.sign * atlas.chamber_signs[0]);
        for line in &side.lines {
            let a = sign * line.log_x.mid().exp();
            let Some(x) = plot_coords([a, 1.0], log_scale).map(|p| p[0]) else { continue };
            if x <= w.x[0] || x >= w.x[1] {
                continue;
            }
            let px = w.pixel([x, w.y[0]])[0];
            let _ = writeln!(
                out,
                r##"<line x1="{px:.2}" y1="0" x2="{px:.2}" y2="{SIZE}" stroke="#888" stroke-width="0.6" stroke-dasharray="4 3"/>"##
            );
        }
    }
}

fn curve(out: &mut String, lines: &[Polyline], signs: [i8; 2], w: &Window, log_scale: bool) {
    for l in lines {
        let mut run: Vec<[f64; 2]> = Vec::new();
        let flush = |run: &mut Vec<[f64; 2]>, out: &mut String| {
            if run.len() > 1 {
                let pts: Vec<String> = run.iter().map(|p| format!("{:.2},{:.2}", p[0], p[1])).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.2"/>"#,
                    pts.join(" ")
                );
            }
            run.clear();
        };
        for p in l.points(signs) {
            match plot_coords(p, log_scale).filter(|q| w.contains_loosely(*q)) {
                Some(q) => run.push(w.pixel(q)),
                None => flush(&mut run, out),
            }
        }
        flush(&mut run, out);
    }
}

fn axes(out: &mut String, w: &Window) {
    if w.x[0] < 0.0 && w.x[1] > 0.0 {
        let px = w.pixel([0.0, 0.0])[0];
        let _ =
            writeln!(out, r#"<line x1="{px:.2}" y1="0" x2="{px:.2}" y2="{SIZE}" stroke="black" stroke-width="0.8"/>"#);
    }
    if w.y[0] < 0.0 && w.y[1] > 0.0 {
        let py = w.pixel([0.0, 0.0])[1];
        let _ =
            writeln!(out, r#"<line x1="0" y1="{py:.2}" x2="{SIZE}" y2="{py:.2}" stroke="black" stroke-width="0.8"/>"#);
    }
}

/// Renders the atlas (if any) and curve samples given in chamber
/// coordinates after applying `signs`. In log scale only the positive
/// quadrant is drawn, with the window in `(ln a, ln b)`.
pub fn emit_svg(
    atlas: Option<&ChamberAtlas>,
    lines: &[Polyline],
    signs: [i8; 2],
    window: Window,
    log_scale: bool,
) -> Result<String, SvgError> {
    window.check()?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if let Some(a) = atlas {
        shading(&mut out, a, &window, log_scale);
        strip_lines(&mut out, a, &window, log_scale);
    }
    curve(&mut out, lines, signs, &window, log_scale);
    if !log_scale {
        axes(&mut out, &window);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_curve_draws_axes_only() {
        let s = emit_svg(None, &[], [1, 1], Window::square(-1.0, 1.0), false).unwrap();
        assert_eq!(s.matches("<line").count(), 2);
        assert!(!s.contains("<polyline") && !s.contains("fill-opacity"));
    }

    #[test]
    fn degenerate_window_rejected() {
        let w = Window { x: [1.0, 1.0], y: [0.0, 1.0] };
        assert_eq!(emit_svg(None, &[], [1, 1], w, false), Err(SvgError::EmptyWindow(w)));
        let w = Window { x: [0.0, f64::INFINITY], y: [0.0, 1.0] };
        assert!(emit_svg(None, &[], [1, 1], w, true).is_err());
    }

    #[test]
    fn polyline_is_clipped_to_the_window() {
        let l = Polyline {
            cell: 0,
            quadrant: [1, 1],
            log_points: vec![[0.0, 0.0], [0.1, 0.1], [10.0, 10.0], [0.2, 0.0], [0.3, 0.1]],
        };
        let s = emit_svg(None, &[l], [1, 1], Window::square(0.5, 2.0), false).unwrap();
        assert_eq!(s.matches("<polyline").count(), 2);
    }
}
