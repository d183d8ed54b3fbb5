use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("inputs are not index-aligned: {points} points but {weights} weights")]
    Misaligned { points: usize, weights: usize },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate tail: the top order statistics are all equal")]
    DegenerateTail,

    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
