use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("requested {count} distinct elements from a field with {order} elements")]
    CountExceedsField { count: usize, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the set must be nonempty")]
    EmptySet,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),
    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("ground set of size {size} exceeds the exhaustive-check limit {limit}")]
    GroundTooLarge { size: usize, limit: usize },
    #[error("truncated generators have rank {rank}, expected {expected}")]
    RankCollapse { rank: usize, expected: usize },
    #[error("derivatives require characteristic zero")]
    CharNotZero,
    #[error("precision exhausted: need {needed}, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("series have different variable counts ({left} vs {right})")]
    ArityMismatch { left: usize, right: usize },
    #[error("vertex computations support at most 2 variables, got {0}")]
    UnsupportedArity(usize),
    #[error("both combination coefficients are zero")]
    BothZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
