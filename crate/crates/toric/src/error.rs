use fewroots_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("points are not pairwise distinct")]
    RepeatedPoint,
    #[error("point {index} has dimension {found}, expected {expected}")]
    PointDimension { index: usize, expected: usize, found: usize },
    #[error("configuration is empty")]
    Empty,
    #[error("translated points span a sublattice of index {index}")]
    NotGenerating { index: String },
    #[error("translated points do not span a full-rank lattice")]
    NotFullRank,
    #[error("parts of a Cayley configuration live in different dimensions")]
    MixedDimension,
    #[error("no odd cell exists")]
    NoOddCell,
    #[error("index set {0:?} is not an odd cell")]
    NotOddCell(Vec<usize>),
    #[error("hull enumeration supports n <= 3, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("convex hull is not full-dimensional")]
    DegenerateHull,
    #[error("need m = n + 3 points, got m = {m} with n = {n}")]
    WrongCodimension { m: usize, n: usize },
    #[error("linear form {index} vanishes at the requested parameter")]
    Pole { index: usize },
    #[error("linear form {index} vanishes identically (the point is a pyramid apex)")]
    DegenerateForm { index: usize },
    #[error("configuration must be normalized first")]
    NotNormalized,
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
