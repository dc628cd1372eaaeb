use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} overflows {1}")]
    Overflow(String, &'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate point {0}: points must be pairwise distinct")]
    DuplicatePoint(String),
    #[error("invalid use of the infinity pseudo-point: {0}")]
    Infinity(String),
    #[error("invalid size: {0}")]
    Size(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("experiments are not comparable: {0}")]
    Mismatch(String),
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("missing evaluation trees for huffman summation constants")]
    MissingTrees,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for command-line use: 2 validation, 3 I/O, 4 numerical, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::DuplicatePoint(_)
            | Error::Infinity(_)
            | Error::Size(_)
            | Error::Shape(_)
            | Error::Mismatch(_)
            | Error::UnknownTable(_)
            | Error::InsufficientData(_)
            | Error::MissingTrees
            | Error::DivisionByZero => 2,
            Error::Io(_) | Error::Json(_) => 3,
            Error::Overflow(..) | Error::Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
