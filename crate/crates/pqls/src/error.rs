use thiserror::Error;

#[derive(Debug, Error)]
pub enum PqlsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem size {n} exceeds solver budget of {limit} variables")]
    SizeOverBudget { n: usize, limit: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("approximation ratio undefined: baseline energy {baseline} is not strictly negative")]
    MetricUndefined { baseline: f64 },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("csv validation failed: {0}")]
    CsvInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PqlsError>;
