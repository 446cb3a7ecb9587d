use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("matrix not positive definite at pivot {index} (value {value:.3e})")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("spectral intervals overlap or touch: [{a_lo:.6e}, {a_hi:.6e}] vs [{b_lo:.6e}, {b_hi:.6e}]")]
    OverlappingIntervals {
        a_lo: f64,
        a_hi: f64,
        b_lo: f64,
        b_hi: f64,
    },

    #[error("problem too large for dense spectrum fallback: dimension {dim} exceeds {cap}")]
    DenseFallbackTooLarge { dim: usize, cap: usize },

    #[error("iteration limit reached after {iters} iterations (relative residual {residual:.3e})")]
    MaxIterExceeded { iters: usize, residual: f64 },

    #[error("json parse error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
