use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("renewal inversion inconsistent at m={m}: w={w:e}")]
    Inconsistent { m: usize, w: f64 },
    #[error("quadrature did not converge (estimate {value}, error {error:e})")]
    Quadrature { value: f64, error: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Param(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
