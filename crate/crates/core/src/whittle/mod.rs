//! Semi-parametric Whittle estimation of the memory vector `d` and the
//! long-run covariance, from Fourier frequencies ([`fourier`]) or from
//! wavelet scales ([`wavelet`]).

pub mod fourier;
pub mod optim;
pub mod wavelet;

use nalgebra::{DMatrix, DVector};

use crate::float::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Multivariate Fourier Whittle.
    Mfw,
    /// Multivariate wavelet Whittle.
    Mww,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Mfw => "mfw",
            Method::Mww => "mww",
        })
    }
}

/// Joint estimate of the memory vector and a covariance-scale matrix.
#[derive(Debug, Clone)]
pub struct MemoryEstimate<T: Float> {
    pub d: DVector<T>,
    /// Long-run covariance estimate on the scale of the generating model.
    pub cov: DMatrix<T>,
    pub method: Method,
    /// Concentrated criterion value at the optimum.
    pub criterion: T,
    /// Iterations spent in the multivariate minimization.
    pub iterations: usize,
}

impl<T: Float> MemoryEstimate<T> {
    /// Correlation matrix implied by `cov`.
    pub fn correlation(&self) -> DMatrix<T> {
        let p = self.cov.nrows();
        DMatrix::from_fn(p, p, |l, m| {
            self.cov[(l, m)] / (self.cov[(l, l)] * self.cov[(m, m)]).sqrt()
        })
    }
}
