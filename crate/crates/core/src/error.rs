use thiserror::Error;

pub type Result<T, E = FlowError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("balances sum to {0}, expected 0")]
    NonzeroBalanceSum(String),
    #[error("network contains a negative-cost cycle")]
    NegativeCycle,
    #[error("network contains a negative-cost cycle of infinite capacity")]
    NegativeInfiniteCycle,
    #[error("non-integral input: {0}")]
    NonIntegral(String),
    #[error("edge {0} has finite capacity; reduce the instance first")]
    Capacitated(usize),
    #[error("search space of {size} candidates exceeds limit {limit}")]
    SearchSpaceTooLarge { size: String, limit: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
