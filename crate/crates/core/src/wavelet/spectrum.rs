//! Fourier transform of the wavelet on a grid, and the spectral constant
//! `K(delta) = int |lambda|^{-delta} |psi_hat(lambda)|^2 d lambda`.
//!
//! `psi_hat` uses the frequency-domain cascade
//! `psi_hat(l) = m1(l/2) prod_{j=2..J} m0(l/2^j)` with
//! `m0(l) = 2^{-1/2} sum h_k e^{-ikl}` (so `psi_hat` is the transform
//! `int psi(t) e^{-i l t} dt` of the unit-norm wavelet, and `K(0) = 2 pi`
//! by Parseval).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::wavelet::filter::WaveletFilter;

pub const DEFAULT_PRECISION: usize = 10;
const MIN_PRECISION: usize = 3;
const MAX_PRECISION: usize = 15;

/// `psi_hat` sampled on a symmetric, equally spaced grid.
#[derive(Debug, Clone)]
pub struct WaveletSpectrum<T: Float> {
    psih: Vec<Complex<T>>,
    grid: Vec<T>,
    vanishing_moments: usize,
}

impl<T: Float> WaveletSpectrum<T> {
    pub fn psih(&self) -> &[Complex<T>] {
        &self.psih
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn vanishing_moments(&self) -> usize {
        self.vanishing_moments
    }
}

fn transfer<T: Float>(taps: &[T], lambda: T) -> Complex<T> {
    let norm = T::cst(std::f64::consts::FRAC_1_SQRT_2);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, &c) in taps.iter().enumerate() {
        let phase = -lambda * T::from_count(k);
        let (s, cphi) = phase.sin_cos();
        acc += Complex::new(cphi * c, s * c);
    }
    Complex::new(acc.re * norm, acc.im * norm)
}

/// Cascade evaluation of `psi_hat` at arbitrary angular frequencies, with
/// `depth` low-pass refinement levels.
pub fn psi_hat_at<T: Float>(
    filter: &WaveletFilter<T>,
    depth: usize,
    lambdas: &[T],
) -> Vec<Complex<T>> {
    let h = filter.h();
    let g = filter.g();
    let two = T::cst(2.0);
    lambdas
        .iter()
        .map(|&lam| {
            let mut value = transfer(&g, lam / two);
            let mut scale = two * two;
            for _ in 2..=depth {
                value *= transfer(h, lam / scale);
                scale *= two;
            }
            value
        })
        .collect()
}

/// `psi_hat` on the standard grid: `q * 2^J` equally spaced points covering
/// `[-pi 2^(J-3) (q-1)/2, pi 2^(J-3) (q-1)/2]`. Precision `J` must lie in
/// `3..=15`; larger `J` widens and refines the grid.
pub fn psi_hat_exact<T: Float>(
    filter: &WaveletFilter<T>,
    precision: usize,
) -> Result<WaveletSpectrum<T>> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        return Err(Error::InvalidParameter(format!(
            "spectrum precision J must be in {MIN_PRECISION}..={MAX_PRECISION}, got {precision}"
        )));
    }
    let q = filter.len();
    let npts = q << precision;
    let half_width = T::pi()
        * T::cst(2f64.powi(precision as i32 - 3))
        * T::from_count(q - 1)
        / T::cst(2.0);
    let step = half_width * T::cst(2.0) / T::from_count(npts - 1);
    let grid: Vec<T> = (0..npts)
        .map(|i| -half_width + step * T::from_count(i))
        .collect();
    let psih = psi_hat_at(filter, precision, &grid);
    Ok(WaveletSpectrum {
        psih,
        grid,
        vanishing_moments: filter.vanishing_moments(),
    })
}

/// Trapezoid-rule evaluation of `K(delta)` on the spectrum grid.
/// Requires `delta < 2M` so the integrand stays integrable at the origin.
pub fn k_eval<T: Float>(spectrum: &WaveletSpectrum<T>, delta: T) -> Result<T> {
    let two_m = T::from_count(2 * spectrum.vanishing_moments());
    if delta >= two_m {
        return Err(Error::InvalidParameter(format!(
            "delta = {:?} outside the integrable range (delta < 2M = {:?})",
            delta.to_f64(),
            two_m.to_f64()
        )));
    }
    let integrand: Vec<T> = spectrum
        .grid
        .iter()
        .zip(&spectrum.psih)
        .map(|(&lam, psi)| {
            if lam == T::zero() {
                // |lambda|^{2M - delta} limit with 2M > delta
                T::zero()
            } else {
                lam.abs().powf(-delta) * psi.norm_sqr()
            }
        })
        .collect();
    let mut acc = T::zero();
    for w in integrand.windows(2) {
        acc += w[0] + w[1];
    }
    let step = spectrum.grid[1] - spectrum.grid[0];
    Ok(acc * step * T::cst(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::filter::{scaling_filter, WaveletFamily};
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_shape_and_symmetry() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 4).unwrap();
        let s = psi_hat_exact(&f, 10).unwrap();
        assert_eq!(s.grid().len(), 4 * 1024);
        assert_eq!(s.psih().len(), 4 * 1024);
        let a = std::f64::consts::PI * 128.0 * 3.0 / 2.0;
        assert_abs_diff_eq!(s.grid()[0], -a, epsilon = 1e-9);
        assert_abs_diff_eq!(*s.grid().last().unwrap(), a, epsilon = 1e-9);
        let n = s.grid().len();
        for i in 0..8 {
            assert_abs_diff_eq!(s.grid()[i], -s.grid()[n - 1 - i], epsilon = 1e-9);
        }
    }

    #[test]
    fn vanishing_moment_kills_zero_frequency() {
        for order in [2usize, 8, 16] {
            let f = scaling_filter::<f64>(WaveletFamily::Daubechies, order).unwrap();
            let v = psi_hat_at(&f, 10, &[0.0]);
            assert!(v[0].norm_sqr().sqrt() < 1e-6);
        }
    }

    #[test]
    fn precision_out_of_range() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 4).unwrap();
        assert!(psi_hat_exact(&f, 2).is_err());
        assert!(psi_hat_exact(&f, 16).is_err());
    }

    #[test]
    fn k_at_zero_is_two_pi() {
        // Parseval: int |psi_hat|^2 = 2 pi ||psi||^2 = 2 pi
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let s = psi_hat_exact(&f, 10).unwrap();
        let k0 = k_eval(&s, 0.0).unwrap();
        assert!((k0 - std::f64::consts::TAU).abs() / std::f64::consts::TAU < 1e-2);
    }

    #[test]
    fn k_positive_on_daub8() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let s = psi_hat_exact(&f, 10).unwrap();
        for delta in [-0.5, 0.0, 0.5, 1.0] {
            assert!(k_eval(&s, delta).unwrap() > 0.0);
        }
    }

    #[test]
    fn k_rejects_non_integrable_delta() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 4).unwrap();
        let s = psi_hat_exact(&f, 8).unwrap();
        assert!(k_eval(&s, 4.0).is_err());
        assert!(k_eval(&s, 3.999).is_ok());
    }
}
