//! Error type shared by every module, with the CLI exit-code mapping.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index {index} out of range for dimension {dim}")]
    Range { index: usize, dim: usize },

    #[error("matrix is not skew-symmetric: antisymmetrization changed entries by {0:e} (limit 1e-12)")]
    NotSkew(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration budget exceeded: {what} needs {terms} terms (cap: {cap})")]
    Capacity { what: String, terms: u128, cap: String },

    #[error("purity check failed: log Det2(G) = {actual_log}, expected L ln 2 = {expected_log}")]
    Purity { expected_log: f64, actual_log: f64 },

    #[error("distribution does not normalize: total probability {0}")]
    Normalization(f64),

    #[error("symbol vanishes at grid point theta = {0}")]
    SingularSymbol(f64),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("unavailable: {0}")]
    Unavailable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    ///
    /// 2: configuration, 3: capacity, 4: purity or model failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Purity { .. } | Error::Normalization(_) | Error::SingularSymbol(_) => 4,
            _ => 2,
        }
    }
}
