use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {message} (achieved error {achieved:.3e})")]
    Numerical { message: String, achieved: f64 },
    #[error("line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn validation<T>(field: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation {
        field: field.to_string(),
        message: msg.into(),
    })
}
