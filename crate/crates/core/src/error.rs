use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("polynomial is constant in the eliminated variable")]
    DegreeError,
    #[error("nullspace dimension {found} differs from expected {expected}")]
    DimensionError { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("logarithm of a non-positive enclosure")]
    LogDomain,
    #[error("division by an enclosure containing zero")]
    DivisionByZero,
}
