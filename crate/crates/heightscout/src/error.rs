use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("matrix is singular")]
    Singular,

    #[error("kernel is trivial: as many independent columns as rows")]
    EmptyKernel,

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial must have degree at least one")]
    DegreeZero,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("diagonal entry at position {0} is not positive")]
    NonPositiveDiagonal(usize),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("enumeration budget exceeded: projected {projected} candidates > budget {budget}")]
    BudgetExceeded { projected: String, budget: u64 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("no qualifying point exists with height up to {bound}")]
    NoPointWithinBound { bound: String },

    #[error("not a cover: point {witness:?} is uncovered")]
    NotACover { witness: Vec<BigInt> },

    #[error("form pool cannot cover the cube: {0}")]
    NoCover(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("json error: {0}")]
    Json(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
