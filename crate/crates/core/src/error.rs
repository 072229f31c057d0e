use thiserror::Error;

use crate::numerics::Weight;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square")]
    NotSquare,

    #[error("degenerate normal: all components are zero")]
    DegenerateNormal,

    #[error("non-finite float value {0}")]
    NonFinite(f64),

    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}, expected 2..=5")]
    UnsupportedDimension(usize),

    #[error("point set is not full-dimensional (affine dimension {affine_dim} < {dim})")]
    NotFullDimensional { dim: usize, affine_dim: usize },

    #[error("dominated facet selected: weight {weight} on facet {vertices:?}")]
    DominatedFacet { weight: Weight, vertices: Vec<usize> },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance too large for enumeration: {0}")]
    TooLarge(String),

    #[error("linear program did not terminate within {0} pivots")]
    PivotLimit(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
