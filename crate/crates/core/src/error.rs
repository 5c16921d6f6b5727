use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("span vectors are linearly dependent")]
    DegenerateSpan,
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("star of the cell is truncated by the window boundary")]
    BoundaryTruncated,
    #[error("point is not in the zonotope")]
    NotInZonotope,
    #[error("generator set is not sufficiently rich")]
    InsufficientGenerators,
    #[error("height is zero, no gradient")]
    ZeroHeight,
    #[error("cell is not horizontal")]
    NotHorizontal,
    #[error("direction is not in general position")]
    NotGeneralPosition,
    #[error("move digraph contains a cycle")]
    MoveCycle,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
