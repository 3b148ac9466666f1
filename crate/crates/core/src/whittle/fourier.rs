//! Multivariate Fourier Whittle (MFW) estimation.
//!
//! The discrete Fourier transform at the Fourier frequencies
//! `lambda_j = 2 pi j / N`, `j = 1..m`, is
//! `W(lambda_j) = (2 pi N)^{-1/2} sum_t X(t) e^{i t lambda_j}`, and the
//! periodogram `I(j) = W W*`. Concentrating the Whittle likelihood over the
//! covariance gives
//!
//! `Omega_hat(d)_{lm} = (1/m) sum_j lambda_j^{d_l + d_m}
//!     Re[e^{-i theta_j (d_l - d_m)} I_{lm}(j)]`
//!
//! and the profile criterion
//! `R(d) = log det Omega_hat(d) - 2 (sum_l d_l) (1/m) sum_j log lambda_j`,
//! where `theta_j` is the phase-shift of the spectral approximation at the
//! origin: `(pi - lambda_j)/2` (second order, the default), `pi/2` (first
//! order) or `0` (no phase).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::MultiSeries;
use crate::whittle::optim::{brent_min, quasi_newton, QnOptions};
use crate::whittle::{MemoryEstimate, Method};

/// Phase convention of the local spectral approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// `e^{i (pi - lambda_j) d / 2}` — second-order approximation.
    #[default]
    SecondOrder,
    /// `e^{i pi d / 2}` — first-order approximation.
    FirstOrder,
    /// No phase correction (biases the covariance estimate, not `d`).
    NoPhase,
}

impl PhaseMode {
    fn theta<T: Float>(self, lambda: T) -> T {
        let half = T::cst(0.5);
        match self {
            PhaseMode::SecondOrder => (T::pi() - lambda) * half,
            PhaseMode::FirstOrder => T::pi() * half,
            PhaseMode::NoPhase => T::zero(),
        }
    }
}

/// DFT rows at the first `m` Fourier frequencies.
#[derive(Debug, Clone)]
pub struct FourierTransformSet<T: Float> {
    w: DMatrix<Complex<T>>,
    lambdas: Vec<T>,
    n: usize,
}

impl<T: Float> FourierTransformSet<T> {
    /// `m x p` matrix of transform values, row `j`.
    pub fn w(&self) -> &DMatrix<Complex<T>> {
        &self.w
    }

    /// Frequencies `2 pi j / N`, strictly increasing in `(0, pi)`.
    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub fn p(&self) -> usize {
        self.w.ncols()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Single-component restriction (used by the univariate initialization).
    pub fn component(&self, l: usize) -> Self {
        Self {
            w: self.w.column(l).clone_owned().reshape_generic(
                nalgebra::Dyn(self.m()),
                nalgebra::Dyn(1),
            ),
            lambdas: self.lambdas.clone(),
            n: self.n,
        }
    }
}

/// Default bandwidth `m = floor(N^0.65)`.
pub fn default_bandwidth(n: usize) -> usize {
    (n as f64).powf(0.65).floor() as usize
}

/// DFT of `x` at the Fourier frequencies `j = 1..m` (requires `m < N/2`).
pub fn fourier_transform<T: Float>(x: &MultiSeries<T>, m: usize) -> Result<FourierTransformSet<T>> {
    let n = x.n();
    let p = x.p();
    if m == 0 || 2 * m >= n {
        return Err(Error::InvalidParameter(format!(
            "number of frequencies m must satisfy 1 <= m < N/2, got m = {m}, N = {n}"
        )));
    }
    let scale = T::one() / (T::two_pi() * T::from_count(n)).sqrt();
    let data = x.data();
    let mut w = DMatrix::from_element(m, p, Complex::new(T::zero(), T::zero()));
    let mut lambdas = Vec::with_capacity(m);
    for j in 1..=m {
        let lambda = T::two_pi() * T::from_count(j) / T::from_count(n);
        lambdas.push(lambda);
        let (s1, c1) = lambda.sin_cos();
        let rot = Complex::new(c1, s1);
        let mut phase = Complex::new(T::one(), T::zero());
        let mut acc = vec![Complex::new(T::zero(), T::zero()); p];
        for t in 1..=n {
            // incremental rotation, resynchronized to keep the drift negligible
            if t % 256 == 0 {
                let arg = lambda * T::from_count(t);
                let (s, c) = arg.sin_cos();
                phase = Complex::new(c, s);
            } else {
                phase *= rot;
            }
            for (l, a) in acc.iter_mut().enumerate() {
                let xv = data[(t - 1, l)];
                *a += Complex::new(phase.re * xv, phase.im * xv);
            }
        }
        for (l, a) in acc.iter().enumerate() {
            w[(j - 1, l)] = Complex::new(a.re * scale, a.im * scale);
        }
    }
    Ok(FourierTransformSet { w, lambdas, n })
}

/// Concentrated covariance estimate at memory vector `d`.
pub fn mfw_cov_eval<T: Float>(
    d: &[T],
    f: &FourierTransformSet<T>,
    phase: PhaseMode,
) -> DMatrix<T> {
    let p = f.p();
    let m = f.m();
    assert_eq!(d.len(), p, "memory vector length must match components");
    let mut acc = DMatrix::<T>::zeros(p, p);
    let mut v = vec![Complex::new(T::zero(), T::zero()); p];
    for (j, &lambda) in f.lambdas.iter().enumerate() {
        let theta = phase.theta(lambda);
        for (l, vl) in v.iter_mut().enumerate() {
            let r = lambda.powf(d[l]);
            let (s, c) = (-theta * d[l]).sin_cos();
            let wjl = f.w[(j, l)];
            *vl = Complex::new(r * c, r * s) * wjl;
        }
        for l in 0..p {
            for mm in l..p {
                acc[(l, mm)] += (v[l] * v[mm].conj()).re;
            }
        }
    }
    let inv_m = T::one() / T::from_count(m);
    for l in 0..p {
        for mm in l..p {
            let val = acc[(l, mm)] * inv_m;
            acc[(l, mm)] = val;
            acc[(mm, l)] = val;
        }
    }
    acc
}

fn mean_log_lambda<T: Float>(f: &FourierTransformSet<T>) -> T {
    let mut s = T::zero();
    for &l in &f.lambdas {
        s += l.ln();
    }
    s / T::from_count(f.m())
}

/// Profile Whittle criterion
/// `R(d) = log det Omega_hat(d) - 2 (sum d) mean(log lambda_j)`;
/// returns `+inf` when `Omega_hat(d)` is not positive definite.
pub fn mfw_eval<T: Float>(d: &[T], f: &FourierTransformSet<T>, phase: PhaseMode) -> T {
    let cov = mfw_cov_eval(d, f, phase);
    let chol = match nalgebra::Cholesky::new(cov) {
        Some(c) => c,
        None => return T::infinity(),
    };
    let mut half_logdet = T::zero();
    for i in 0..d.len() {
        half_logdet += chol.l_dirty()[(i, i)].ln();
    }
    let dsum = d.iter().fold(T::zero(), |a, &b| a + b);
    let two = T::cst(2.0);
    two * half_logdet - two * dsum * mean_log_lambda(f)
}

/// Options for [`mfw_with`].
#[derive(Debug, Clone)]
pub struct MfwOptions<T: Float> {
    pub phase: PhaseMode,
    /// Search interval for the per-component initialization.
    pub search: (T, T),
    pub optim: QnOptions<T>,
}

impl<T: Float> Default for MfwOptions<T> {
    fn default() -> Self {
        Self {
            phase: PhaseMode::SecondOrder,
            search: (T::cst(-1.0), T::cst(3.0)),
            optim: QnOptions::default(),
        }
    }
}

/// MFW estimation with the default options (second-order phase).
pub fn mfw<T: Float>(x: &MultiSeries<T>, m: usize, phase: PhaseMode) -> Result<MemoryEstimate<T>> {
    mfw_with(
        x,
        m,
        &MfwOptions {
            phase,
            ..MfwOptions::default()
        },
    )
}

/// MFW estimation: univariate Whittle fits initialize a quasi-Newton
/// minimization of the multivariate criterion; the returned covariance is
/// `2 pi Omega_hat(d_hat)`, on the scale of the generating model.
pub fn mfw_with<T: Float>(
    x: &MultiSeries<T>,
    m: usize,
    opts: &MfwOptions<T>,
) -> Result<MemoryEstimate<T>> {
    let fts = fourier_transform(x, m)?;
    let p = fts.p();
    let (lo, hi) = opts.search;
    let mut d0 = DVector::<T>::zeros(p);
    for l in 0..p {
        let sub = fts.component(l);
        let (dl, _) = brent_min(
            |d| mfw_eval(&[d], &sub, opts.phase),
            lo,
            hi,
            T::cst(1e-8),
            200,
        );
        d0[l] = dl;
    }
    let opt = quasi_newton(|v| mfw_eval(v.as_slice(), &fts, opts.phase), d0, &opts.optim)?;
    let cov = mfw_cov_eval(opt.x.as_slice(), &fts, opts.phase) * T::two_pi();
    Ok(MemoryEstimate {
        d: opt.x,
        cov,
        method: Method::Mfw,
        criterion: opt.value,
        iterations: opt.iterations,
    })
}
