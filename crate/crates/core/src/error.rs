use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("unstable autoregressive polynomial: root of modulus {modulus} inside the closed unit disc")]
    UnstableAr { modulus: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series too short: need at least {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error(
        "optimizer did not converge after {iterations} iterations \
         (best criterion {best_value:e} at d = {best_point:?})"
    )]
    NonConvergence {
        iterations: usize,
        best_point: Vec<f64>,
        best_value: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
