//! Daubechies filters, the exact (boundary-discarding) DWT, and the wavelet
//! spectral constant `K`.

mod filter;
mod spectrum;
mod transform;

pub use filter::{scaling_filter, WaveletFamily, WaveletFilter};
pub use spectrum::{k_eval, psi_hat_at, psi_hat_exact, WaveletSpectrum, DEFAULT_PRECISION};
pub use transform::{compute_nj, dwt_exact, WaveletDecomp};
