use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("coefficients are not Hermitian (symmetry defect {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("multiplier symbol is not finite at frequency {frequency:?}")]
    NonFiniteSymbol { frequency: Vec<f64> },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("circulant embedding has a negative eigenvalue {0:.3e}")]
    NegativeEmbedding(f64),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
