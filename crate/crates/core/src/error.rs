use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the command-line exit codes: configuration and
/// input problems are usage errors, contract violations are refusals to
/// evaluate outside a validity range.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn is_contract(&self) -> bool {
        matches!(self, Error::Contract(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
