//! Boundary-discarding pyramidal wavelet transform.
//!
//! Only coefficients whose filter support lies fully inside the available
//! samples are kept (no periodization or reflection), which gives the
//! per-scale counts `n_j = floor((n_{j-1} - q)/2) + 1`.

use crate::error::{Error, Result};
use crate::float::Float;
use crate::wavelet::filter::WaveletFilter;

/// Per-scale coefficient counts and the maximal scale for a length-`n`
/// series under a length-`q` filter. `n < q` yields an empty decomposition.
pub fn compute_nj(n: usize, q: usize) -> (Vec<usize>, usize) {
    let mut nj = Vec::new();
    let mut cur = n;
    while cur >= q {
        let next = (cur - q) / 2 + 1;
        nj.push(next);
        cur = next;
    }
    let jmax = nj.len();
    (nj, jmax)
}

/// Detail coefficients of all scales, concatenated scale 1..Jmax.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomp<T: Float> {
    coeffs: Vec<T>,
    index: Vec<usize>,
    nj: Vec<usize>,
}

impl<T: Float> WaveletDecomp<T> {
    /// Coefficients of scale `j` (1-based).
    pub fn scale(&self, j: usize) -> &[T] {
        assert!(j >= 1 && j <= self.jmax(), "scale {j} out of range");
        let start = if j == 1 { 0 } else { self.index[j - 2] };
        &self.coeffs[start..self.index[j - 1]]
    }

    /// Cumulative end-offset of each scale's block.
    pub fn index(&self) -> &[usize] {
        &self.index
    }

    /// Per-scale coefficient counts.
    pub fn nj(&self) -> &[usize] {
        &self.nj
    }

    pub fn jmax(&self) -> usize {
        self.nj.len()
    }

    /// All detail coefficients, scales concatenated.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }
}

/// Pyramidal transform of `x`, keeping interior coefficients only.
/// At each scale `d_j[k] = sum_m g_m a_{j-1}[2k+m]`,
/// `a_j[k] = sum_m h_m a_{j-1}[2k+m]`.
pub fn dwt_exact<T: Float>(x: &[T], filter: &WaveletFilter<T>) -> Result<WaveletDecomp<T>> {
    let q = filter.len();
    if x.len() < q {
        return Err(Error::SeriesTooShort {
            needed: q,
            got: x.len(),
        });
    }
    let h = filter.h();
    let g = filter.g();
    let mut coeffs = Vec::new();
    let mut index = Vec::new();
    let mut nj = Vec::new();
    let mut approx = x.to_vec();
    while approx.len() >= q {
        let n_next = (approx.len() - q) / 2 + 1;
        let mut next_approx = Vec::with_capacity(n_next);
        for k in 0..n_next {
            let mut dsum = T::zero();
            let mut asum = T::zero();
            for m in 0..q {
                let v = approx[2 * k + m];
                dsum += g[m] * v;
                asum += h[m] * v;
            }
            coeffs.push(dsum);
            next_approx.push(asum);
        }
        nj.push(n_next);
        index.push(coeffs.len());
        approx = next_approx;
    }
    Ok(WaveletDecomp { coeffs, index, nj })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::filter::{scaling_filter, WaveletFamily};
    use approx::assert_abs_diff_eq;

    #[test]
    fn printed_counts_for_n256_q4() {
        let (nj, jmax) = compute_nj(256, 4);
        assert_eq!(nj, vec![127, 62, 30, 14, 6, 2]);
        assert_eq!(jmax, 6);
        let cumulative: Vec<usize> = nj
            .iter()
            .scan(0usize, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        assert_eq!(cumulative, vec![127, 189, 219, 233, 239, 241]);
    }

    #[test]
    fn haar_counts_are_dyadic() {
        let (nj, jmax) = compute_nj(256, 2);
        assert_eq!(jmax, 8);
        for (j, &n) in nj.iter().enumerate() {
            assert_eq!(n, 1 << (7 - j));
        }
    }

    #[test]
    fn short_series_edge_cases() {
        assert_eq!(compute_nj(8, 8), (vec![1], 1));
        assert_eq!(compute_nj(7, 8), (vec![], 0));
    }

    #[test]
    fn constant_series_has_zero_details() {
        for order in [2usize, 4, 8] {
            let f = scaling_filter::<f64>(WaveletFamily::Daubechies, order).unwrap();
            let x = vec![3.25f64; 64];
            let d = dwt_exact(&x, &f).unwrap();
            for c in d.coeffs() {
                assert_abs_diff_eq!(c, &0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn haar_hand_convolution() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 2).unwrap();
        let d = dwt_exact(&[1.0, 2.0, 3.0, 4.0], &f).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // g = (h1, -h0): d_k = (a_{2k} - a_{2k+1})/sqrt(2)
        assert_eq!(d.jmax(), 2);
        assert_abs_diff_eq!(d.scale(1)[0], -r, epsilon = 1e-14);
        assert_abs_diff_eq!(d.scale(1)[1], -r, epsilon = 1e-14);
        // approximations feeding scale 2: (3/sqrt2, 7/sqrt2)
        assert_abs_diff_eq!(d.scale(2)[0], (3.0 - 7.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn counts_match_compute_nj() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 4).unwrap();
        let x: Vec<f64> = (0..256).map(|t| (t as f64 * 0.37).sin()).collect();
        let d = dwt_exact(&x, &f).unwrap();
        let (nj, jmax) = compute_nj(256, 4);
        assert_eq!(d.nj(), &nj[..]);
        assert_eq!(d.jmax(), jmax);
        assert_eq!(d.index(), &[127, 189, 219, 233, 239, 241]);
        assert!(dwt_exact(&x[..3], &f).is_err());
    }
}
