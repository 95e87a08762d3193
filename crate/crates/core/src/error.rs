use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    BadField(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("group construction failed: {0}")]
    BadGroup(String),

    #[error("matrix budget exceeded: computation needs {needed} entries, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("field does not split the algebra: {0}")]
    NotSplitting(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
