use fewroots_core::CoreError;
use fewroots_toric::ToricError;
use thiserror::Error;

/// An axis-aligned box in a chart, `[t_lo, t_hi] x [u_lo, u_hi]`, with the
/// cells it lives in.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ChartBox {
    pub cells: (usize, usize),
    pub t: [f64; 2],
    pub u: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChamberError {
    #[error("linear form {0} vanishes identically")]
    DegenerateForm(usize),
    #[error("degenerate curve: {0}")]
    Degenerate(String),
    #[error("precision exhausted: {what} ({} unresolved region(s))", boxes.len())]
    PrecisionExhausted { what: String, boxes: Vec<ChartBox> },
    #[error("bound formulas need n >= 1")]
    BadDimension,
    #[error("shear system: {0}")]
    Shear(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Core(#[from] CoreError),
}
