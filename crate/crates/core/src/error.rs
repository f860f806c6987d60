use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `-inf + +inf` has no value in either semiring.
    #[error("undefined sum of -inf and +inf")]
    UndefinedInfinitySum,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("multiset has {found} elements but the threshold expects {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("diagonal entry ({index},{index}) is not zero")]
    NonZeroDiagonal { index: usize },

    #[error("matrix must be square and non-empty")]
    NotSquare,

    #[error("entry ({row},{col}) must be finite")]
    NonFinite { row: usize, col: usize },

    #[error("zone is empty")]
    EmptyZone,

    #[error("no fixed point after {iterations} iterations")]
    IterationBudgetExceeded { iterations: usize },

    #[error("threshold p={p} is outside 1..={n}")]
    InvalidThreshold { p: usize, n: usize },

    #[error("dimension {n} exceeds the enumeration limit {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
