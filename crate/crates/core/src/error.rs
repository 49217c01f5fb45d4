use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("triangular factor is singular (zero diagonal at {0})")]
    SingularFactor(usize),

    #[error("appended column is numerically dependent on the current factorization")]
    DegenerateColumn,

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("constraint {0} is not in the working set")]
    NotInWorkingSet(usize),

    #[error("initial point violates constraint {row} by {violation:e}")]
    InfeasibleStart { row: usize, violation: f64 },

    #[error("working set would exceed the problem dimension {0}")]
    WorkingSetFull(usize),

    #[error("incomplete factorization failed: zero pivot in row {0}")]
    ZeroPivot(usize),

    #[error("invalid bounds at index {index}: lower {lower} > upper {upper}")]
    InvalidBounds { index: usize, lower: f64, upper: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
