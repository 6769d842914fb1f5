use thiserror::Error;

/// Errors raised across the library.
///
/// Each variant maps onto one process exit code in the CLI front end
/// (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("undefined entropy at cell {cell}: vacuum density with positive pressure")]
    UndefinedEntropy { cell: usize },

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("inconsistent assumption: {0}")]
    InconsistentAssumption(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("missing input `{scalar}` required by constant {constant}")]
    MissingInput { constant: String, scalar: String },

    #[error("non-finite quadrature result for integrand `{integrand}`")]
    Overflow { integrand: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// 2 for parse errors, 3 for violated preconditions, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Overflow { .. } | Error::Numerical(_) | Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
