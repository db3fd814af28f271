use thiserror::Error;

/// Errors raised by channel construction, conversion and evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("convention error: {0}")]
    Convention(String),

    #[error("map is not completely positive (most negative eigenvalue {min_eigenvalue:.6e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
