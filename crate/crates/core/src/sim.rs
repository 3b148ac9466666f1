//! Simulation of multivariate Gaussian FIVARMA sample paths and their
//! analytic long-run covariance.
//!
//! The model is `A(L) diag(1-L)^d X(t) = B(L) u(t)` with
//! `A(1) = I + sum A_k`, `B(1) = I + sum B_k` and Gaussian innovations
//! `u ~ N(0, Sigma)`, so a path is a VARMA realisation pushed through the
//! componentwise fractional integration filter `(1-L)^{-d_l}`.
//!
//! Transients are handled with a burn-in of `2N` leading samples shared by
//! the VARMA recursion and the fractional filter; integer orders of
//! integration (`d >= 0.5`) are applied as cumulative sums on top of the
//! fractional part in `[-0.5, 0.5)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::MultiSeries;

const SYMMETRY_TOL: f64 = 1e-12;

/// Parametric FIVARMA(q, d, r) model.
#[derive(Debug, Clone)]
pub struct FivarmaModel<T: Float> {
    d: DVector<T>,
    sigma: DMatrix<T>,
    ar: Vec<DMatrix<T>>,
    ma: Vec<DMatrix<T>>,
}

impl<T: Float> FivarmaModel<T> {
    /// Validates and builds a model: `sigma` symmetric positive definite,
    /// the AR polynomial stable, all matrices `p x p`.
    pub fn new(
        d: Vec<T>,
        sigma: DMatrix<T>,
        ar: Vec<DMatrix<T>>,
        ma: Vec<DMatrix<T>>,
    ) -> Result<Self> {
        let p = d.len();
        if p == 0 {
            return Err(Error::ShapeMismatch("empty memory vector".into()));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("memory vector".into()));
        }
        check_covariance(&sigma, p)?;
        for (name, mats) in [("AR", &ar), ("MA", &ma)] {
            if mats.iter().any(|m| m.nrows() != p || m.ncols() != p) {
                return Err(Error::ShapeMismatch(format!("{name} matrix is not {p}x{p}")));
            }
        }
        check_ar_stability(&ar)?;
        Ok(Self {
            d: DVector::from_vec(d),
            sigma,
            ar,
            ma,
        })
    }

    pub fn p(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self) -> &DVector<T> {
        &self.d
    }

    pub fn sigma(&self) -> &DMatrix<T> {
        &self.sigma
    }

    pub fn ar(&self) -> &[DMatrix<T>] {
        &self.ar
    }

    pub fn ma(&self) -> &[DMatrix<T>] {
        &self.ma
    }
}

/// Analytic long-run covariance (the zero-frequency scaling matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct LongRunCov<T: Float> {
    omega: DMatrix<T>,
}

impl<T: Float> LongRunCov<T> {
    /// Wraps a symmetric matrix (tolerance `1e-12` entrywise).
    pub fn new(omega: DMatrix<T>) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::ShapeMismatch("long-run covariance not square".into()));
        }
        let tol = T::cst(SYMMETRY_TOL);
        for i in 0..omega.nrows() {
            for j in 0..i {
                if (omega[(i, j)] - omega[(j, i)]).abs() > tol {
                    return Err(Error::ShapeMismatch(
                        "long-run covariance not symmetric".into(),
                    ));
                }
            }
        }
        Ok(Self { omega })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.omega
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.omega
    }

    /// Correlation matrix `omega_lm / sqrt(omega_ll omega_mm)`.
    pub fn correlation(&self) -> DMatrix<T> {
        let p = self.omega.nrows();
        DMatrix::from_fn(p, p, |l, m| {
            self.omega[(l, m)] / (self.omega[(l, l)] * self.omega[(m, m)]).sqrt()
        })
    }
}

fn check_covariance<T: Float>(sigma: &DMatrix<T>, p: usize) -> Result<()> {
    if sigma.nrows() != p || sigma.ncols() != p {
        return Err(Error::ShapeMismatch(format!(
            "covariance is {}x{}, expected {p}x{p}",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    let tol = T::cst(SYMMETRY_TOL);
    for i in 0..p {
        for j in 0..i {
            if (sigma[(i, j)] - sigma[(j, i)]).abs() > tol {
                return Err(Error::ShapeMismatch("covariance not symmetric".into()));
            }
        }
    }
    if nalgebra::Cholesky::new(sigma.clone()).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// Stability of `A(L) = I + sum_k A_k L^k`: all roots of `det A(z)` must lie
/// outside the closed unit disc, i.e. the companion matrix of the recursion
/// `x(t) = -sum_k A_k x(t-k)` has spectral radius `< 1`.
fn check_ar_stability<T: Float>(ar: &[DMatrix<T>]) -> Result<()> {
    if ar.is_empty() {
        return Ok(());
    }
    let p = ar[0].nrows();
    let q = ar.len();
    let mut companion = DMatrix::<T>::zeros(p * q, p * q);
    for (k, a) in ar.iter().enumerate() {
        for i in 0..p {
            for j in 0..p {
                companion[(i, k * p + j)] = -a[(i, j)];
            }
        }
    }
    for i in 0..p * (q - 1) {
        companion[(p + i, i)] = T::one();
    }
    let eigs = companion.complex_eigenvalues();
    let mut max_mod = T::zero();
    for e in eigs.iter() {
        let m = e.norm_sqr().sqrt();
        if m > max_mod {
            max_mod = m;
        }
    }
    if max_mod >= T::one() {
        // eigenvalues are reciprocals of the polynomial roots
        let root = (T::one() / max_mod).to_f64().unwrap_or(f64::NAN);
        return Err(Error::UnstableAr { modulus: root });
    }
    Ok(())
}

/// `n` i.i.d. rows from `N(0, sigma)`, via the Cholesky factor.
pub fn gaussian_noise<T: Float, R: Rng + ?Sized>(
    n: usize,
    sigma: &DMatrix<T>,
    rng: &mut R,
) -> Result<MultiSeries<T>> {
    let p = sigma.nrows();
    check_covariance(sigma, p)?;
    let chol = nalgebra::Cholesky::new(sigma.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let mut data = DMatrix::<T>::zeros(n, p);
    let mut z = DVector::<T>::zeros(p);
    for t in 0..n {
        for i in 0..p {
            z[i] = T::standard_normal(rng);
        }
        let row = &l * &z;
        for i in 0..p {
            data[(t, i)] = row[i];
        }
    }
    MultiSeries::new(data)
}

/// VARMA recursion from zero initial state, no burn-in dropped.
fn varma_raw<T: Float, R: Rng + ?Sized>(
    total: usize,
    sigma: &DMatrix<T>,
    ar: &[DMatrix<T>],
    ma: &[DMatrix<T>],
    rng: &mut R,
) -> Result<DMatrix<T>> {
    let p = sigma.nrows();
    let chol = nalgebra::Cholesky::new(sigma.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let mut eps_hist: Vec<DVector<T>> = Vec::with_capacity(total);
    let mut x_hist: Vec<DVector<T>> = Vec::with_capacity(total);
    let mut z = DVector::<T>::zeros(p);
    for t in 0..total {
        for i in 0..p {
            z[i] = T::standard_normal(rng);
        }
        let eps = &l * &z;
        // u(t) = eps(t) + sum_k B_k eps(t-k)
        let mut u = eps.clone();
        for (k, b) in ma.iter().enumerate() {
            if t >= k + 1 {
                u += b * &eps_hist[t - k - 1];
            }
        }
        // x(t) = u(t) - sum_k A_k x(t-k)
        let mut x = u;
        for (k, a) in ar.iter().enumerate() {
            if t >= k + 1 {
                x -= a * &x_hist[t - k - 1];
            }
        }
        eps_hist.push(eps);
        x_hist.push(x);
    }
    let mut data = DMatrix::<T>::zeros(total, p);
    for t in 0..total {
        for i in 0..p {
            data[(t, i)] = x_hist[t][i];
        }
    }
    Ok(data)
}

/// Stationary VARMA path of length `n`. A `2n` burn-in from zero initial
/// state is discarded; with no AR and no MA terms the path is exactly the
/// innovation noise (no burn-in, so the draw stream matches
/// [`gaussian_noise`]).
pub fn varma<T: Float, R: Rng + ?Sized>(
    n: usize,
    sigma: &DMatrix<T>,
    ar: &[DMatrix<T>],
    ma: &[DMatrix<T>],
    rng: &mut R,
) -> Result<MultiSeries<T>> {
    let p = sigma.nrows();
    check_covariance(sigma, p)?;
    for (name, mats) in [("AR", &ar), ("MA", &ma)] {
        if mats.iter().any(|m| m.nrows() != p || m.ncols() != p) {
            return Err(Error::ShapeMismatch(format!("{name} matrix is not {p}x{p}")));
        }
    }
    check_ar_stability(ar)?;
    if ar.is_empty() && ma.is_empty() {
        return gaussian_noise(n, sigma, rng);
    }
    let burnin = 2 * n;
    let data = varma_raw(n + burnin, sigma, ar, ma, rng)?;
    MultiSeries::new(data.rows(burnin, n).into_owned())
}

/// Coefficients of `(1-L)^{-d}`: `pi_0 = 1`, `pi_k = pi_{k-1} (k-1+d)/k`.
///
/// The ratio recursion avoids Gamma-function overflow for large `k`.
pub fn fracdiff_coefficients<T: Float>(d: T, len: usize) -> Vec<T> {
    let mut pi = Vec::with_capacity(len);
    if len == 0 {
        return pi;
    }
    pi.push(T::one());
    for k in 1..len {
        let kf = T::from_count(k);
        let prev = pi[k - 1];
        pi.push(prev * (kf - T::one() + d) / kf);
    }
    pi
}

fn split_integer_part<T: Float>(d: T) -> (usize, T) {
    let half = T::cst(0.5);
    if d >= half {
        let dd = (d + half).floor();
        let big_d = dd.to_usize().expect("integer part of memory parameter");
        (big_d, d - T::from_count(big_d))
    } else {
        (0, d)
    }
}

/// Componentwise fractional integration `x_l = (1-L)^{-d_l} u_l`, truncated
/// to the available samples. For `d_l >= 0.5` the order is split as
/// `d_l = D + d*` with `d* in [-0.5, 0.5)` and `D` cumulative summations are
/// applied after the fractional filter.
pub fn fracdiff_integrate<T: Float>(u: &MultiSeries<T>, d: &[T]) -> Result<MultiSeries<T>> {
    if d.len() != u.p() {
        return Err(Error::ShapeMismatch(format!(
            "{} memory parameters for {} components",
            d.len(),
            u.p()
        )));
    }
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("memory vector".into()));
    }
    let n = u.n();
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(u.p());
    for l in 0..u.p() {
        let mut col = u.component(l);
        let (big_d, frac) = split_integer_part(d[l]);
        if frac != T::zero() {
            let kernel = fracdiff_coefficients(frac, n);
            let mut filtered = T::convolve_full(&col, &kernel);
            filtered.truncate(n);
            col = filtered;
        }
        for _ in 0..big_d {
            let mut acc = T::zero();
            for x in col.iter_mut() {
                acc += *x;
                *x = acc;
            }
        }
        cols.push(col);
    }
    MultiSeries::from_columns(&cols)
}

/// Analytic long-run covariance `A(1)^{-1} B(1) Sigma B(1)^T A(1)^{-T}`.
pub fn long_run_cov<T: Float>(
    sigma: &DMatrix<T>,
    ar: &[DMatrix<T>],
    ma: &[DMatrix<T>],
) -> Result<LongRunCov<T>> {
    let p = sigma.nrows();
    check_covariance(sigma, p)?;
    let mut a1 = DMatrix::<T>::identity(p, p);
    for a in ar {
        a1 += a;
    }
    let mut b1 = DMatrix::<T>::identity(p, p);
    for b in ma {
        b1 += b;
    }
    let a1_inv = a1
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("A(1) is not invertible".into()))?;
    let m = &a1_inv * &b1 * sigma * b1.transpose() * a1_inv.transpose();
    // exact symmetry up to rounding; fold the rounding away
    let sym = (&m + m.transpose()) * T::cst(0.5);
    LongRunCov::new(sym)
}

/// Simulates a FIVARMA path: VARMA innovations, then componentwise
/// fractional integration, with a shared `2n` burn-in discarded at the end.
/// Also returns the analytic long-run covariance of the model.
pub fn fivarma<T: Float, R: Rng + ?Sized>(
    n: usize,
    model: &FivarmaModel<T>,
    rng: &mut R,
) -> Result<(MultiSeries<T>, LongRunCov<T>)> {
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }
    let omega = long_run_cov(model.sigma(), model.ar(), model.ma())?;
    let burnin = 2 * n;
    let total = n + burnin;
    let u = if model.ar().is_empty() && model.ma().is_empty() {
        gaussian_noise(total, model.sigma(), rng)?
    } else {
        MultiSeries::new(varma_raw(total, model.sigma(), model.ar(), model.ma(), rng)?)?
    };
    let d: Vec<T> = model.d().iter().copied().collect();
    let x = fracdiff_integrate(&u, &d)?;
    let trimmed = MultiSeries::new(x.data().rows(burnin, n).into_owned())?;
    Ok((trimmed, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn sigma_rho(rho: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0])
    }

    #[test]
    fn gaussian_noise_matches_target_covariance() {
        let n = 100_000;
        let x = gaussian_noise(n, &DMatrix::<f64>::identity(2, 2), &mut rng(7)).unwrap();
        let d = x.data();
        let mut cov = [[0.0; 2]; 2];
        for t in 0..n {
            for i in 0..2 {
                for j in 0..2 {
                    cov[i][j] += d[(t, i)] * d[(t, j)];
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((cov[i][j] / n as f64 - target).abs() < 0.05);
            }
        }
    }

    #[test]
    fn gaussian_noise_rejects_degenerate_covariance() {
        let zero = DMatrix::<f64>::zeros(2, 2);
        assert!(matches!(
            gaussian_noise(10, &zero, &mut rng(0)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn gaussian_noise_is_deterministic() {
        let s = sigma_rho(0.3);
        let a = gaussian_noise(64, &s, &mut rng(5)).unwrap();
        let b = gaussian_noise(64, &s, &mut rng(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn varma_without_terms_is_noise() {
        let s = sigma_rho(0.5);
        let a = varma(128, &s, &[], &[], &mut rng(3)).unwrap();
        let b = gaussian_noise(128, &s, &mut rng(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn varma_matches_direct_recursion_oracle() {
        // p = 1, x(t) = -0.5 x(t-1) + eps(t); same seed drives an
        // independent re-derivation of the path
        let n = 10_000;
        let sigma = DMatrix::from_row_slice(1, 1, &[1.0f64]);
        let ar = vec![DMatrix::from_row_slice(1, 1, &[0.5f64])];
        let x = varma(n, &sigma, &ar, &[], &mut rng(11)).unwrap();

        let mut r = rng(11);
        let total = 3 * n;
        let mut path = Vec::with_capacity(total);
        let mut prev = 0.0f64;
        for _ in 0..total {
            let eps: f64 = f64::standard_normal(&mut r);
            let xt = eps - 0.5 * prev;
            path.push(xt);
            prev = xt;
        }
        for (a, b) in x.component(0).iter().zip(path[2 * n..].iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }

        // lag-1 autocorrelation of a long sample sits near -0.5
        let long = varma(1_000_000, &sigma, &ar, &[], &mut rng(12)).unwrap();
        let v = long.component(0);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let c0: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
        let c1: f64 = v.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
        assert!((c1 / c0 + 0.5).abs() < 0.01, "acf(1) = {}", c1 / c0);
    }

    #[test]
    fn unstable_ar_is_rejected() {
        let sigma = DMatrix::from_row_slice(1, 1, &[1.0f64]);
        let ar = vec![DMatrix::from_row_slice(1, 1, &[1.1f64])];
        match varma(16, &sigma, &ar, &[], &mut rng(0)) {
            Err(Error::UnstableAr { modulus }) => {
                assert!((modulus - 1.0 / 1.1).abs() < 1e-9)
            }
            other => panic!("expected instability error, got {other:?}"),
        }
    }

    #[test]
    fn fracdiff_zero_is_identity_and_one_is_cumsum() {
        let u = MultiSeries::from_columns(&[vec![1.0f64, -2.0, 3.5, 0.25]]).unwrap();
        let same = fracdiff_integrate(&u, &[0.0]).unwrap();
        assert_eq!(same, u);
        let cum = fracdiff_integrate(&u, &[1.0]).unwrap();
        assert_eq!(cum.component(0), vec![1.0, -1.0, 2.5, 2.75]);
    }

    #[test]
    fn fracdiff_kernel_recursion() {
        let pi = fracdiff_coefficients(0.4f64, 4);
        assert_abs_diff_eq!(pi[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pi[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(pi[2], 0.28, epsilon = 1e-15);
        assert_abs_diff_eq!(pi[3], 0.224, epsilon = 1e-15);
    }

    /// Printed long-run covariance of the worked bivariate example:
    /// Sigma = [[1, .8], [.8, 1]], A1 = [[.8, 0], [.2, .6]], B1 = diag(.4, .7).
    #[test]
    fn long_run_cov_reference_values() {
        let sigma = sigma_rho(0.8);
        let ar = vec![DMatrix::from_row_slice(2, 2, &[0.8, 0.0, 0.2, 0.6])];
        let ma = vec![DMatrix::from_row_slice(2, 2, &[0.4, 0.0, 0.0, 0.7])];
        let omega = long_run_cov(&sigma, &ar, &ma).unwrap();
        let m = omega.matrix();
        assert_abs_diff_eq!(m[(0, 0)], 0.6049383, epsilon = 1e-6);
        assert_abs_diff_eq!(m[(0, 1)], 0.5854938, epsilon = 1e-6);
        assert_abs_diff_eq!(m[(1, 0)], 0.5854938, epsilon = 1e-6);
        assert_abs_diff_eq!(m[(1, 1)], 0.9730806, epsilon = 1e-6);
    }

    #[test]
    fn long_run_cov_without_terms_is_sigma() {
        let sigma = sigma_rho(0.8);
        let omega = long_run_cov(&sigma, &[], &[]).unwrap();
        assert_eq!(omega.matrix(), &sigma);
    }

    /// Pure-AR variant: Omega = (I+A)^{-1} Sigma (I+A)^{-T}, long-run
    /// correlation 0.754.
    #[test]
    fn long_run_cov_ar_only_values() {
        let sigma = sigma_rho(0.8);
        let ar = vec![DMatrix::from_row_slice(2, 2, &[0.8, 0.0, 0.2, 0.6])];
        let omega = long_run_cov(&sigma, &ar, &[]).unwrap();
        let m = omega.matrix();
        assert_abs_diff_eq!(m[(0, 0)], 0.3086, epsilon = 5e-4);
        assert_abs_diff_eq!(m[(0, 1)], 0.2392, epsilon = 5e-4);
        assert_abs_diff_eq!(m[(1, 1)], 0.3260, epsilon = 5e-4);
        let corr = omega.correlation();
        assert_abs_diff_eq!(corr[(0, 1)], 0.754, epsilon = 1e-3);
    }

    #[test]
    fn fivarma_iid_case_and_determinism() {
        let model = FivarmaModel::new(vec![0.0, 0.0], sigma_rho(0.8), vec![], vec![]).unwrap();
        let (x, omega) = fivarma(256, &model, &mut rng(9)).unwrap();
        assert_eq!(x.n(), 256);
        assert_eq!(omega.matrix(), &sigma_rho(0.8));
        let (y, _) = fivarma(256, &model, &mut rng(9)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn fivarma_reference_omega() {
        let model = FivarmaModel::new(
            vec![0.2, 0.4],
            sigma_rho(0.8),
            vec![DMatrix::from_row_slice(2, 2, &[0.8, 0.0, 0.2, 0.6])],
            vec![DMatrix::from_row_slice(2, 2, &[0.4, 0.0, 0.0, 0.7])],
        )
        .unwrap();
        let (_, omega) = fivarma(256, &model, &mut rng(1)).unwrap();
        assert_abs_diff_eq!(omega.matrix()[(0, 0)], 0.6049383, epsilon = 1e-6);
        assert_abs_diff_eq!(omega.matrix()[(0, 1)], 0.5854938, epsilon = 1e-6);
        assert_abs_diff_eq!(omega.matrix()[(1, 1)], 0.9730806, epsilon = 1e-6);
    }

    #[test]
    fn long_run_cov_output_is_symmetric() {
        let sigma =
            DMatrix::<f64>::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0]);
        let ar = vec![DMatrix::from_row_slice(
            3,
            3,
            &[0.2, 0.1, 0.0, -0.1, 0.3, 0.05, 0.0, 0.0, 0.25],
        )];
        let omega = long_run_cov(&sigma, &ar, &[]).unwrap();
        let m = omega.matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[(i, j)] - m[(j, i)]).abs() <= 1e-12);
            }
        }
    }
}
