use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("function is not tabulated at {point}")]
    UntabulatedPoint { point: String },

    #[error("closure increment {increment} has no strictly positive coordinate")]
    NonTerminatingClosure { increment: String },

    #[error("invalid increment {increment}: {reason}")]
    InvalidIncrement { increment: String, reason: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),

    #[error("symbol `{0}` appears more than once in the increment set")]
    RepeatedSymbol(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("order {0} is even; use the even-order probe instead")]
    EvenOrder(u32),

    #[error("order {0} is not supported here: {1}")]
    UnsupportedOrder(u32, String),

    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_increment(increment: impl ToString, reason: impl Into<String>) -> Self {
        Error::InvalidIncrement {
            increment: increment.to_string(),
            reason: reason.into(),
        }
    }
}
