use thiserror::Error;

/// Failures raised by the bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the range where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A root could not be bracketed, a system was singular, or a
    /// constructed certificate failed its own check.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Malformed code file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn numeric<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Numeric(msg.into()))
}
