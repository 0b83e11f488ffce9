use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix rows are linearly dependent")]
    DependentRows,

    #[error("target vector lies outside the rational span of the basis")]
    TargetOutsideSpan,

    #[error("the system has no integer solution")]
    NoIntegerSolution,

    #[error("embedding failed after {0} rescaling retries")]
    EmbeddingRetriesExhausted(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no positive integer beta*R satisfies the requested bound")]
    InfeasibleEpsilon,

    #[error("signing restart budget ({0}) exhausted; parameters are likely misconfigured")]
    RestartBudgetExhausted(u32),

    #[error("malformed encoding: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
