use fewroots_certify::CertifyError;
use fewroots_chambers::ChamberError;
use fewroots_core::CoreError;
use fewroots_toric::ToricError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HaasError {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("vertex {index} enclosure [{lo}, {hi}] excludes the printed value {printed}")]
    VertexMismatch { index: usize, lo: f64, hi: f64, printed: f64 },
    #[error("E3 has {0} boundary vertices among the critical points, expected 4")]
    VertexCount(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Chamber(#[from] ChamberError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}
