use thiserror::Error;

/// Errors surfaced by the library operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {min} sequences, got {got}")]
    TooFewSequences { min: usize, got: usize },
    #[error("sequence {id} is empty")]
    EmptySequence { id: u32 },
    #[error("sequences must have equal length (got {0} and {1})")]
    UnequalLengths(usize, usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("no common alignment satisfies cumulative budget {budget}")]
    InfeasibleBudget { budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unreachable dynamic-program entry")]
    UnreachableEntry,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
