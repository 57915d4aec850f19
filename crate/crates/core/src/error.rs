use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("torus dimensions must be positive (got {m}x{n})")]
    EmptyTorus { m: usize, n: usize },

    #[error("state vector has {got} entries, expected {expected}")]
    StateCount { expected: usize, got: usize },

    #[error("threshold must lie in 1..=5 (got {0})")]
    BadThreshold(u8),

    #[error("no repeat within {0} steps")]
    BudgetExhausted(usize),

    #[error("cell set is not connected")]
    NotConnected,

    #[error("cell set contains an odd wraparound")]
    ContainsOddWraparound,

    #[error("cell ({row},{col}) is not in the set")]
    CellNotInSet { row: usize, col: usize },

    #[error("epsilon must lie in (0, 1] (got {0})")]
    InvalidEpsilon(f64),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("hard instance not defined for n = {n}: {reason}")]
    BadN { n: usize, reason: &'static str },

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("exhaustive search needs m*n <= {limit} (got {got})")]
    TooLarge { limit: usize, got: usize },

    #[error("row {0} has no majority wraparound-consistent parity class")]
    NoMajorityClass(usize),

    #[error("grid parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
