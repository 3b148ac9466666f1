//! Multivariate wavelet Whittle (MWW) estimation.
//!
//! From the per-scale scalogram `I(j) = sum_k W_{j,k} W_{j,k}^T` the
//! concentrated criterion over scales `j0..=j1` is
//!
//! `G_hat(d)_{lm} = (1/n) sum_j 2^{-j (d_l + d_m)} I(j)_{lm}`,
//! `R(d) = log det G_hat(d) + 2 log(2) ((1/n) sum_j j n_j) (sum_l d_l)`,
//!
//! with `n = sum_j n_j`. The long-run covariance follows from `G_hat` by the
//! cosine/K phase correction
//! `Omega_hat_{lm} = 2 pi G_hat_{lm} / (cos(pi (d_l - d_m)/2) K(d_l + d_m))`,
//! which degenerates when `d_l - d_m` approaches an odd integer.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::MultiSeries;
use crate::wavelet::{dwt_exact, k_eval, psi_hat_exact, WaveletDecomp, WaveletFilter,
    WaveletSpectrum, DEFAULT_PRECISION};
use crate::whittle::optim::{brent_min, quasi_newton, QnOptions};
use crate::whittle::{MemoryEstimate, Method};

/// Pairs `|d_l - d_m|` in this open band are reported as unreliable for the
/// covariance correction (the cosine factor is close to its zero).
pub const UNRELIABLE_GAP_BAND: (f64, f64) = (0.75, 1.25);
const ODD_GAP_TOL: f64 = 1e-8;

/// Per-scale outer-product accumulation of wavelet coefficient vectors.
#[derive(Debug, Clone)]
pub struct Scalogram<T: Float> {
    mats: Vec<DMatrix<T>>,
    nj: Vec<usize>,
}

impl<T: Float> Scalogram<T> {
    /// Accumulates the per-scale `p x p` matrices from one decomposition per
    /// component; all components must share the same per-scale counts.
    pub fn from_decomps(decomps: &[WaveletDecomp<T>]) -> Result<Self> {
        if decomps.is_empty() {
            return Err(Error::ShapeMismatch("no decompositions".into()));
        }
        let nj = decomps[0].nj().to_vec();
        for d in decomps.iter().skip(1) {
            if d.nj() != nj.as_slice() {
                return Err(Error::ShapeMismatch(
                    "per-scale counts differ across components".into(),
                ));
            }
        }
        let p = decomps.len();
        let mut mats = Vec::with_capacity(nj.len());
        for (j, &njk) in nj.iter().enumerate() {
            let mut m = DMatrix::<T>::zeros(p, p);
            let scales: Vec<&[T]> = decomps.iter().map(|d| d.scale(j + 1)).collect();
            for k in 0..njk {
                for l in 0..p {
                    let wl = scales[l][k];
                    for mm in l..p {
                        m[(l, mm)] += wl * scales[mm][k];
                    }
                }
            }
            for l in 0..p {
                for mm in l + 1..p {
                    m[(mm, l)] = m[(l, mm)];
                }
            }
            mats.push(m);
        }
        Ok(Self { mats, nj })
    }

    /// `I(j)` for scale `j` (1-based).
    pub fn scale_matrix(&self, j: usize) -> &DMatrix<T> {
        &self.mats[j - 1]
    }

    pub fn nj(&self) -> &[usize] {
        &self.nj
    }

    pub fn jmax(&self) -> usize {
        self.nj.len()
    }

    pub fn p(&self) -> usize {
        self.mats.first().map_or(0, |m| m.nrows())
    }

    /// Single-component restriction.
    pub fn component(&self, l: usize) -> Self {
        Self {
            mats: self
                .mats
                .iter()
                .map(|m| DMatrix::from_element(1, 1, m[(l, l)]))
                .collect(),
            nj: self.nj.clone(),
        }
    }
}

/// Scale range `j0..=j1` used in estimation (1-based, inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleRange {
    pub j0: usize,
    pub j1: usize,
}

impl ScaleRange {
    pub fn new(j0: usize, j1: usize) -> Result<Self> {
        if j0 < 1 || j0 > j1 {
            return Err(Error::InvalidParameter(format!(
                "scale range requires 1 <= j0 <= j1, got ({j0}, {j1})"
            )));
        }
        Ok(Self { j0, j1 })
    }

    /// Default range: `j0 = 2` up to `floor(log2 N)` (later capped at Jmax).
    pub fn default_for(n: usize) -> Self {
        let j1 = (n as f64).log2().floor() as usize;
        Self {
            j0: 2,
            j1: j1.max(2),
        }
    }

    /// Clamps `j1` to the maximal scale of a decomposition; fails when `j0`
    /// itself is out of reach or the range holds fewer coefficients than
    /// components.
    fn resolve<T: Float>(self, s: &Scalogram<T>) -> Result<(usize, usize, usize)> {
        if self.j0 > s.jmax() {
            return Err(Error::InvalidParameter(format!(
                "lowest scale j0 = {} exceeds the maximal scale {}",
                self.j0,
                s.jmax()
            )));
        }
        let j1 = self.j1.min(s.jmax());
        let n: usize = s.nj()[self.j0 - 1..j1].iter().sum();
        if n < s.p() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients in scales {}..={} cannot identify {} components",
                n,
                self.j0,
                j1,
                s.p()
            )));
        }
        Ok((self.j0, j1, n))
    }
}

/// Concentrated covariance-scale estimate
/// `G_hat(d) = (1/n) sum_j 2^{-j(d_l+d_m)} I(j)_{lm}` over the range.
pub fn mww_cov_eval<T: Float>(d: &[T], s: &Scalogram<T>, range: ScaleRange) -> DMatrix<T> {
    let p = s.p();
    assert_eq!(d.len(), p, "memory vector length must match components");
    let (j0, j1, n) = range.resolve(s).expect("valid scale range");
    let mut acc = DMatrix::<T>::zeros(p, p);
    let ln2 = T::cst(std::f64::consts::LN_2);
    for j in j0..=j1 {
        let mat = s.scale_matrix(j);
        let jf = T::from_count(j);
        for l in 0..p {
            for mm in l..p {
                let w = (-(jf * (d[l] + d[mm])) * ln2).exp();
                acc[(l, mm)] += w * mat[(l, mm)];
            }
        }
    }
    let inv_n = T::one() / T::from_count(n);
    for l in 0..p {
        for mm in l..p {
            let v = acc[(l, mm)] * inv_n;
            acc[(l, mm)] = v;
            acc[(mm, l)] = v;
        }
    }
    acc
}

/// Profile wavelet Whittle criterion
/// `R(d) = log det G_hat(d) + 2 log 2 ((1/n) sum_j j n_j) (sum d)`;
/// `+inf` when `G_hat(d)` is not positive definite.
pub fn mww_eval<T: Float>(d: &[T], s: &Scalogram<T>, range: ScaleRange) -> T {
    let g = mww_cov_eval(d, s, range);
    let chol = match nalgebra::Cholesky::new(g) {
        Some(c) => c,
        None => return T::infinity(),
    };
    let mut half_logdet = T::zero();
    for i in 0..d.len() {
        half_logdet += chol.l_dirty()[(i, i)].ln();
    }
    let (j0, j1, n) = range.resolve(s).expect("valid scale range");
    let mut weighted = T::zero();
    for j in j0..=j1 {
        weighted += T::from_count(j) * T::from_count(s.nj()[j - 1]);
    }
    let kappa = weighted / T::from_count(n);
    let dsum = d.iter().fold(T::zero(), |a, &b| a + b);
    let two = T::cst(2.0);
    two * half_logdet + two * T::cst(std::f64::consts::LN_2) * kappa * dsum
}

/// Phase-corrected long-run covariance with per-pair reliability flags.
#[derive(Debug, Clone)]
pub struct CorrectedCov<T: Float> {
    /// `Omega_hat`; entries at non-identifiable pairs are NaN.
    pub omega: DMatrix<T>,
    /// Pairs with `|d_l - d_m|` within `1e-8` of an odd integer (entry NaN).
    pub unidentifiable: Vec<(usize, usize)>,
    /// Pairs with `|d_l - d_m|` in the open band `(0.75, 1.25)`: computed,
    /// but the cosine factor is small and the entry is noise-amplified.
    pub unreliable: Vec<(usize, usize)>,
}

/// Converts `G_hat` into `Omega_hat` by the cosine/K correction
/// (`K` is evaluated per pair sum and memoized).
pub fn omega_correct<T: Float>(
    g: &DMatrix<T>,
    d: &[T],
    spectrum: &WaveletSpectrum<T>,
) -> Result<CorrectedCov<T>> {
    let p = g.nrows();
    if d.len() != p || g.ncols() != p {
        return Err(Error::ShapeMismatch(
            "covariance-scale matrix and memory vector disagree".into(),
        ));
    }
    let mut k_cache: HashMap<u64, T> = HashMap::new();
    let mut k_of = |delta: T| -> Result<T> {
        let key = delta.to_f64().unwrap_or(f64::NAN).to_bits();
        if let Some(&v) = k_cache.get(&key) {
            return Ok(v);
        }
        let v = k_eval(spectrum, delta)?;
        k_cache.insert(key, v);
        Ok(v)
    };
    let mut omega = DMatrix::<T>::zeros(p, p);
    let mut unidentifiable = Vec::new();
    let mut unreliable = Vec::new();
    let (band_lo, band_hi) = UNRELIABLE_GAP_BAND;
    for l in 0..p {
        for m in l..p {
            let gap = (d[l] - d[m]).abs();
            let gap_f = gap.to_f64().unwrap_or(f64::NAN);
            let nearest_odd = 2.0 * ((gap_f - 1.0) / 2.0).round() + 1.0;
            let odd_dist = (gap_f - nearest_odd).abs();
            if l != m && odd_dist <= ODD_GAP_TOL {
                omega[(l, m)] = T::cst(f64::NAN);
                omega[(m, l)] = T::cst(f64::NAN);
                unidentifiable.push((l, m));
                continue;
            }
            if l != m && gap_f > band_lo && gap_f < band_hi {
                unreliable.push((l, m));
            }
            let cos_term = (T::pi() * (d[l] - d[m]) * T::cst(0.5)).cos();
            let k = k_of(d[l] + d[m])?;
            // G estimates Omega cos(.) K(.) / (2 pi)
            let v = g[(l, m)] * T::two_pi() / (cos_term * k);
            omega[(l, m)] = v;
            omega[(m, l)] = v;
        }
    }
    Ok(CorrectedCov {
        omega,
        unidentifiable,
        unreliable,
    })
}

/// Result of MWW estimation: the memory/covariance estimate plus the raw
/// covariance-scale matrix `G_hat(d_hat)` and the identifiability flags.
#[derive(Debug, Clone)]
pub struct MwwEstimate<T: Float> {
    pub estimate: MemoryEstimate<T>,
    pub g: DMatrix<T>,
    pub unidentifiable: Vec<(usize, usize)>,
    pub unreliable: Vec<(usize, usize)>,
}

/// Options for [`mww_with`] / [`mww_wav_with`].
#[derive(Debug, Clone)]
pub struct MwwOptions<T: Float> {
    /// Search interval for the per-component initialization.
    pub search: (T, T),
    pub optim: QnOptions<T>,
    /// Precision `J` of the wavelet spectrum used for `K`.
    pub spectrum_precision: usize,
}

impl<T: Float> Default for MwwOptions<T> {
    fn default() -> Self {
        Self {
            search: (T::cst(-1.0), T::cst(3.0)),
            optim: QnOptions::default(),
            spectrum_precision: DEFAULT_PRECISION,
        }
    }
}

/// MWW estimation from raw observations with default options.
pub fn mww<T: Float>(
    x: &MultiSeries<T>,
    filter: &WaveletFilter<T>,
    range: ScaleRange,
) -> Result<MwwEstimate<T>> {
    mww_with(x, filter, range, &MwwOptions::default())
}

pub fn mww_with<T: Float>(
    x: &MultiSeries<T>,
    filter: &WaveletFilter<T>,
    range: ScaleRange,
    opts: &MwwOptions<T>,
) -> Result<MwwEstimate<T>> {
    let mut decomps = Vec::with_capacity(x.p());
    for l in 0..x.p() {
        decomps.push(dwt_exact(&x.component(l), filter)?);
    }
    let scalogram = Scalogram::from_decomps(&decomps)?;
    let spectrum = psi_hat_exact(filter, opts.spectrum_precision)?;
    mww_wav_with(&scalogram, &spectrum, range, opts)
}

/// MWW estimation from a precomputed decomposition (identical pipeline to
/// [`mww`] after the transform).
pub fn mww_wav<T: Float>(
    scalogram: &Scalogram<T>,
    spectrum: &WaveletSpectrum<T>,
    range: ScaleRange,
) -> Result<MwwEstimate<T>> {
    mww_wav_with(scalogram, spectrum, range, &MwwOptions::default())
}

pub fn mww_wav_with<T: Float>(
    scalogram: &Scalogram<T>,
    spectrum: &WaveletSpectrum<T>,
    range: ScaleRange,
    opts: &MwwOptions<T>,
) -> Result<MwwEstimate<T>> {
    let p = scalogram.p();
    let (j0, j1, _) = range.resolve(scalogram)?;
    let range = ScaleRange { j0, j1 };
    let (lo, hi) = opts.search;
    let mut d0 = DVector::<T>::zeros(p);
    for l in 0..p {
        let sub = scalogram.component(l);
        let (dl, _) = brent_min(
            |d| mww_eval(&[d], &sub, range),
            lo,
            hi,
            T::cst(1e-8),
            200,
        );
        d0[l] = dl;
    }
    let opt = quasi_newton(
        |v| mww_eval(v.as_slice(), scalogram, range),
        d0,
        &opts.optim,
    )?;
    let g = mww_cov_eval(opt.x.as_slice(), scalogram, range);
    let corrected = omega_correct(&g, opt.x.as_slice(), spectrum)?;
    Ok(MwwEstimate {
        estimate: MemoryEstimate {
            d: opt.x,
            cov: corrected.omega,
            method: Method::Mww,
            criterion: opt.value,
            iterations: opt.iterations,
        },
        g,
        unidentifiable: corrected.unidentifiable,
        unreliable: corrected.unreliable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::{scaling_filter, WaveletFamily};
    use approx::assert_abs_diff_eq;

    fn decomp(x: &[f64], order: usize) -> WaveletDecomp<f64> {
        let f = scaling_filter(WaveletFamily::Daubechies, order).unwrap();
        dwt_exact(x, &f).unwrap()
    }

    #[test]
    fn scalar_scalogram_is_energy_per_scale() {
        let x: Vec<f64> = (0..128).map(|t| ((t * 13 % 17) as f64) - 8.0).collect();
        let d = decomp(&x, 4);
        let s = Scalogram::from_decomps(std::slice::from_ref(&d)).unwrap();
        for j in 1..=d.jmax() {
            let direct: f64 = d.scale(j).iter().map(|w| w * w).sum();
            assert_abs_diff_eq!(s.scale_matrix(j)[(0, 0)], direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn duplicated_component_gives_rank_one_scalogram() {
        let x: Vec<f64> = (0..96).map(|t| (t as f64 * 0.9).sin()).collect();
        let d1 = decomp(&x, 8);
        let d2 = decomp(&x, 8);
        let s = Scalogram::from_decomps(&[d1, d2]).unwrap();
        for j in 1..=s.jmax() {
            let m = s.scale_matrix(j);
            assert_abs_diff_eq!(m[(0, 1)], m[(0, 0)], epsilon = 1e-12);
            assert_abs_diff_eq!(m[(1, 1)], m[(0, 0)], epsilon = 1e-12);
        }
    }

    #[test]
    fn mismatched_counts_rejected() {
        let x: Vec<f64> = (0..64).map(|t| t as f64).collect();
        let d1 = decomp(&x, 4);
        let d2 = decomp(&x[..60], 4);
        assert!(Scalogram::from_decomps(&[d1, d2]).is_err());
    }

    #[test]
    fn cov_eval_identity_weights_at_zero() {
        let x: Vec<f64> = (0..128).map(|t| ((t * 29 % 31) as f64) * 0.1).collect();
        let y: Vec<f64> = (0..128).map(|t| ((t * 7 % 23) as f64) - 11.0).collect();
        let s = Scalogram::from_decomps(&[decomp(&x, 4), decomp(&y, 4)]).unwrap();
        let range = ScaleRange::new(1, s.jmax()).unwrap();
        let g = mww_cov_eval(&[0.0, 0.0], &s, range);
        let n: usize = s.nj().iter().sum();
        let mut expect = nalgebra::DMatrix::<f64>::zeros(2, 2);
        for j in 1..=s.jmax() {
            expect += s.scale_matrix(j);
        }
        expect /= n as f64;
        for l in 0..2 {
            for m in 0..2 {
                assert_abs_diff_eq!(g[(l, m)], expect[(l, m)], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn cov_eval_single_scale_closed_form() {
        let x: Vec<f64> = (0..256).map(|t| ((t * 3 % 19) as f64).sqrt()).collect();
        let s = Scalogram::from_decomps(&[decomp(&x, 4)]).unwrap();
        let j = 2;
        let range = ScaleRange::new(j, j).unwrap();
        let d = 0.35f64;
        let g = mww_cov_eval(&[d], &s, range);
        let expect =
            2f64.powf(-2.0 * j as f64 * d) * s.scale_matrix(j)[(0, 0)] / s.nj()[j - 1] as f64;
        assert_abs_diff_eq!(g[(0, 0)], expect, epsilon = 1e-13);
    }

    #[test]
    fn omega_correct_equal_memory_uses_k_of_twice_d() {
        let filter = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let spectrum = psi_hat_exact(&filter, 10).unwrap();
        let g = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.2]);
        let d = 0.3;
        let out = omega_correct(&g, &[d, d], &spectrum).unwrap();
        assert!(out.unidentifiable.is_empty());
        assert!(out.unreliable.is_empty());
        let k = k_eval(&spectrum, 2.0 * d).unwrap();
        let tau = std::f64::consts::TAU;
        assert_abs_diff_eq!(out.omega[(0, 1)], 0.5 * tau / k, epsilon = 1e-12);
        assert_abs_diff_eq!(out.omega[(0, 0)], 1.0 * tau / k, epsilon = 1e-12);
    }

    #[test]
    fn omega_correct_flags_odd_gap() {
        let filter = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let spectrum = psi_hat_exact(&filter, 8).unwrap();
        let g = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let out = omega_correct(&g, &[0.2, 1.2], &spectrum).unwrap();
        assert_eq!(out.unidentifiable, vec![(0, 1)]);
        assert!(out.omega[(0, 1)].is_nan());
        assert!(out.omega[(0, 0)].is_finite());
        // nearby but not exactly odd: computed yet flagged unreliable
        let out2 = omega_correct(&g, &[0.2, 1.1], &spectrum).unwrap();
        assert_eq!(out2.unreliable, vec![(0, 1)]);
        assert!(out2.omega[(0, 1)].is_finite());
        // diagonal always defined
        assert!(out2.omega[(1, 1)].is_finite());
    }
}
