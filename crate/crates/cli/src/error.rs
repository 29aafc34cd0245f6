use fewroots_certify::CertifyError;
use fewroots_chambers::ChamberError;
use fewroots_core::CoreError;
use fewroots_haas::HaasError;
use fewroots_toric::ToricError;
use thiserror::Error;

use crate::svg::SvgError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Chamber(#[from] ChamberError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Haas(#[from] HaasError),
}

impl CliError {
    /// `2` when the computation ran out of precision, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Chamber(ChamberError::PrecisionExhausted { .. }) => 2,
            CliError::Haas(
                HaasError::DegenerateInput(_) | HaasError::Chamber(ChamberError::PrecisionExhausted { .. }),
            ) => 2,
            _ => 1,
        }
    }
}
