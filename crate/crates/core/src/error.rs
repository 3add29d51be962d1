use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("work budget of {limit} exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("integer {value} exceeds the depth limit of {limit}")]
    DepthLimit { value: i64, limit: i64 },

    #[error("universe generator {0} is not a Left end")]
    GeneratorNotLeftEnd(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("assertion contradicts a proven result: {0}")]
    ContradictoryAssertion(String),
}
