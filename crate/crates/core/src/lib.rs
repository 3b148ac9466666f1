//! Simulation and semi-parametric Whittle estimation for multivariate
//! long-memory time series.
//!
//! The crate provides:
//!
//! - [`sim`]: Gaussian FIVARMA sample paths (`varma`, `fracdiff_integrate`,
//!   `fivarma`) and the analytic long-run covariance;
//! - [`wavelet`]: Daubechies filters, the exact boundary-discarding DWT and
//!   the spectral constant `K`;
//! - [`whittle::fourier`]: Fourier-based (MFW) estimation of the memory
//!   vector `d` and the long-run covariance;
//! - [`whittle::wavelet`]: wavelet-based (MWW) estimation, valid for
//!   nonstationary series and series with polynomial trends;
//! - [`diagnostics`]: per-scale variance/covariance/correlation summaries,
//!   sliding windows, identifiability checks and differencing helpers.
//!
//! All numeric code is generic over the scalar type through [`Float`]
//! (`f32` or `f64`); the `*64` aliases below fix the working precision used
//! by the command-line tools.

pub mod diagnostics;
mod error;
mod float;
mod series;
pub mod sim;
pub mod wavelet;
pub mod whittle;

pub use error::{Error, Result};
pub use float::Float;
pub use series::MultiSeries;

/// Concrete aliases at the default working precision.
pub type MultiSeries64 = MultiSeries<f64>;
pub type FivarmaModel64 = sim::FivarmaModel<f64>;
pub type LongRunCov64 = sim::LongRunCov<f64>;
pub type WaveletFilter64 = wavelet::WaveletFilter<f64>;
pub type WaveletDecomp64 = wavelet::WaveletDecomp<f64>;
pub type WaveletSpectrum64 = wavelet::WaveletSpectrum<f64>;
pub type MemoryEstimate64 = whittle::MemoryEstimate<f64>;
pub type MwwEstimate64 = whittle::wavelet::MwwEstimate<f64>;
pub type Scalogram64 = whittle::wavelet::Scalogram<f64>;

/// Single-precision aliases.
pub type MultiSeries32 = MultiSeries<f32>;
pub type FivarmaModel32 = sim::FivarmaModel<f32>;
pub type MemoryEstimate32 = whittle::MemoryEstimate<f32>;
