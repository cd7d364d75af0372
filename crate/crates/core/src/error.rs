use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("expected {expected} images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },

    #[error("polynomial `{0}` is not homogeneous for the active grading")]
    NotHomogeneous(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("variable sets overlap: {0}")]
    OverlappingVariables(String),

    #[error("degree key does not match the module grading: {0}")]
    DegreeKey(String),

    #[error("truncation budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("annihilation cap {cap} exceeded")]
    CapExceeded { cap: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("element does not lie in the slice: {0}")]
    NotInSlice(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
