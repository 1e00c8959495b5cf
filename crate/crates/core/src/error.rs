use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group {0} is empty")]
    EmptyGroup(usize),

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("hypercube packing exhausted after {found} of {requested} points (retry with larger p)")]
    PackingExhausted { found: usize, requested: usize },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
