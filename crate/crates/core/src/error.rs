use thiserror::Error;

#[derive(Debug, Error)]
pub enum VilenkinError {
    #[error("invalid base sequence: {0}")]
    InvalidBase(String),

    #[error("group order {order} exceeds the resolution ceiling {ceiling}")]
    ResolutionExceeded { order: u64, ceiling: usize },

    #[error("digit {digit} at coordinate {coordinate} is out of range for base {base}")]
    DigitOutOfRange {
        coordinate: usize,
        digit: usize,
        base: usize,
    },

    #[error("expected {expected} digits, got {got}")]
    DigitCount { expected: usize, got: usize },

    #[error("operands live on different groups")]
    BaseMismatch,

    #[error("{what} = {value} is out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("exponent p = {0} is not admissible here")]
    InvalidExponent(f64),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, VilenkinError>;
