use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {ground}")]
    ElementOutOfRange { element: usize, ground: usize },

    #[error("{what}: size {size} exceeds cap {cap}; reduce the instance size or raise the cap")]
    CapacityExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
