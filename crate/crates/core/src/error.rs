use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace containment violated: {0}")]
    NotContained(String),

    #[error("input is linearly dependent (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is not Jordanesque in the given basis: entry ({row}, {col})")]
    NotJordanesque { row: usize, col: usize },

    #[error("eigenvalue zero is not supported by the idempotent construction")]
    ZeroEigenvalue,

    #[error("{0} is not an eigenvalue")]
    EigenvalueNotFound(String),

    #[error("eigenvalue clusters are closer than tolerance; rerun with the exact backend")]
    EigenvalueAmbiguity,

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("size guard exceeded: {what} = {value} > {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("channel is not trace preserving: residual {0:e}")]
    CptpViolation(f64),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("vectors do not span the ambient space")]
    NotSpanning,

    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
