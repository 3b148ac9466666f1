//! Scalar abstraction: all numeric code in this crate is generic over [`Float`].

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex as FftComplex;
use rustfft::FftPlanner;

/// Floating-point scalar the library is generic over.
///
/// `f64` is the working precision used by the CLI and the reproduction
/// suites; `f32` is available for memory-bound workloads.
pub trait Float:
    nalgebra::RealField + num_traits::Num + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
    /// Conversion from an `f64` constant.
    fn cst(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn infinity() -> Self;

    /// One standard-normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Full linear convolution, `out.len() = a.len() + b.len() - 1`.
    ///
    /// FFT-backed above a size threshold, direct below it; the path is
    /// chosen deterministically from the input sizes.
    fn convolve_full(a: &[Self], b: &[Self]) -> Vec<Self>;
}

macro_rules! impl_float {
    ($t:ty) => {
        impl Float for $t {
            fn infinity() -> Self {
                <$t>::INFINITY
            }

            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            fn convolve_full(a: &[Self], b: &[Self]) -> Vec<Self> {
                convolve_full_impl(a, b)
            }
        }
    };
}

impl_float!(f32);
impl_float!(f64);

// Direct convolution is exact and faster for short inputs; the FFT route is
// needed for the O(N^2)-hostile cases (fractional filters over long paths).
const DIRECT_CONV_MAX_OPS: usize = 1 << 22;

fn convolve_full_impl<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Float + rustfft::FftNum,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().saturating_mul(b.len()) <= DIRECT_CONV_MAX_OPS {
        let mut out = vec![T::zero(); out_len];
        for (i, &ai) in a.iter().enumerate() {
            if ai == T::zero() {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        return out;
    }

    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut fa: Vec<FftComplex<T>> = a
        .iter()
        .map(|&x| FftComplex::new(x, T::zero()))
        .chain(std::iter::repeat(FftComplex::new(T::zero(), T::zero())))
        .take(size)
        .collect();
    let mut fb: Vec<FftComplex<T>> = b
        .iter()
        .map(|&x| FftComplex::new(x, T::zero()))
        .chain(std::iter::repeat(FftComplex::new(T::zero(), T::zero())))
        .take(size)
        .collect();
    fft.process(&mut fa);
    fft.process(&mut fb);
    let scale = T::one() / T::from_count(size);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x = *x * *y * FftComplex::new(scale, T::zero());
    }
    ifft.process(&mut fa);
    fa.truncate(out_len);
    fa.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_matches_direct_on_fft_path() {
        // force the FFT route with inputs big enough to exceed the threshold
        let n = 3000usize;
        let a: Vec<f64> = (0..n).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let b: Vec<f64> = (0..n).map(|i| ((i * 17) % 7) as f64 * 0.25).collect();
        let fft = f64::convolve_full(&a, &b);
        // spot-check a few positions against the direct sum
        for &k in &[0usize, 1, 1234, 2999, 4000, 5998] {
            let mut s = 0.0;
            for i in 0..=k.min(n - 1) {
                let j = k - i;
                if j < n {
                    s += a[i] * b[j];
                }
            }
            assert!((fft[k] - s).abs() < 1e-6 * (1.0 + s.abs()), "lag {k}");
        }
    }

    #[test]
    fn convolution_generic_over_f32() {
        let a = [1.0f32, 2.0, 3.0];
        let b = [1.0f32, -1.0];
        assert_eq!(f32::convolve_full(&a, &b), vec![1.0, 1.0, 1.0, -3.0]);
    }
}
