use fewroots_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("Jacobian is singular at the given point")]
    SingularJacobian,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("system has {polys} equations in {vars} variables; a square system is required")]
    NotSquare { vars: usize, polys: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
