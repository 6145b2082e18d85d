use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("color {color} lists `{name}`; colors must list generators only, inverses are implicit")]
    OddColorSize { color: usize, name: String },
    #[error("relator {index} ({word}) does not alternate between two distinct colors")]
    NotAlternating { index: usize, word: String },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("condition C3 fails in dimension {dimension}: {detail}")]
    C3Violation { dimension: usize, detail: String },
    #[error("incidence matrices do not commute: M_{0} M_{1} != M_{1} M_{0}")]
    NonCommuting(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
