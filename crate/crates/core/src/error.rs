use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli word: {0}")]
    InvalidWord(String),

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid gate step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },

    #[error("{what} needs {n_sites} sites but the cap is {cap}")]
    CapExceeded { what: &'static str, n_sites: usize, cap: usize },

    #[error("site count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
