use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
///
/// Flag positions in [`Error::NotTransverse`] are 1-based positions in the
/// argument list (or tuple) that the failing call received.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid minor index: {0}")]
    InvalidIndex(String),
    #[error("matrix is not square: {rows} rows, expected {expected} entries per row")]
    NotSquare { rows: usize, expected: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not upper-triangular unipotent")]
    NotUnipotentUpperTriangular,
    #[error("unipotent has Jordan blocks {0:?}, expected a single block")]
    NotSingleJordanBlock(Vec<usize>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("flags at positions {0} and {1} are not transverse")]
    NotTransverse(usize, usize),
    #[error("superdiagonal entry ({i},{j}) is zero", i = .0, j = .0 + 1)]
    ZeroSuperdiagonal(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("no positive triple found for t in [1, {0}]")]
    CapExceeded(u64),
    #[error("singular value gap {ratio} at index {index} is below the tolerance")]
    SingularGapTooSmall { index: usize, ratio: f64 },
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("|det| = {0} is not the square of a rational; cannot normalize to determinant ±1")]
    NotNormalizable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
