//! Second scratch probe: identifiability blow-up, K refinement, acf slope.

use longmem::diagnostics::differentiate_component;
use longmem::sim::{fivarma, FivarmaModel};
use longmem::wavelet::{k_eval, psi_hat_at, psi_hat_exact, scaling_filter, WaveletFamily};
use longmem::whittle::wavelet::{mww, ScaleRange};
use longmem::Float;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let filter = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();

    // K refinement: J = 10 vs 12 at several deltas
    for delta in [0.0, 0.4, 0.8, 2.6] {
        let k10 = k_eval(&psi_hat_exact(&filter, 10).unwrap(), delta).unwrap();
        let k12 = k_eval(&psi_hat_exact(&filter, 12).unwrap(), delta).unwrap();
        println!("K({delta}) J10 {k10:.6} J12 {k12:.6} rel {:.2e}", (k10 - k12).abs() / k12);
    }
    // trapezoid convergence rate at delta = 0
    let tau = std::f64::consts::TAU;
    let mut prev_err = f64::NAN;
    for j in 5..=11 {
        let k = k_eval(&psi_hat_exact(&filter, j).unwrap(), 0.0).unwrap();
        let err = (k - tau).abs();
        println!("J={j} K(0) err {err:.3e} ratio {:.2}", prev_err / err);
        prev_err = err;
    }
    // cascade refinement on the coarse grid points
    let s10 = psi_hat_exact(&filter, 10).unwrap();
    let deep = psi_hat_at(&filter, 12, s10.grid());
    let max_dev = s10
        .psih()
        .iter()
        .zip(&deep)
        .map(|(a, b)| ((a - b).norm_sqr().sqrt()))
        .fold(0.0f64, f64::max);
    println!("max |psi_hat| deviation depth 10 vs 12: {max_dev:.2e}");

    // Table 9: d = (0.2, 1.2), rho = 0.8, j0 = 1
    let reps = 500;
    let n = 512;
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.8, 0.8, 1.0]);
    let model = FivarmaModel::new(vec![0.2, 1.2], sigma, vec![], vec![]).unwrap();
    let mut raw_corr = Vec::new();
    let mut diff_corr = Vec::new();
    for r in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        rng.set_stream(r as u64 + 1);
        let (x, _) = fivarma(n, &model, &mut rng).unwrap();
        let range = ScaleRange::new(1, 9).unwrap();
        let est = mww(&x, &filter, range).unwrap();
        raw_corr.push(est.estimate.correlation()[(0, 1)]);
        let xd = differentiate_component(&x, 1, 1).unwrap();
        let est2 = mww(&xd, &filter, range).unwrap();
        diff_corr.push(est2.estimate.correlation()[(0, 1)]);
    }
    for (name, v) in [("raw", raw_corr), ("differenced", diff_corr)] {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0);
        let rmse = ((m - 0.8f64).powi(2) + var).sqrt();
        println!("corr {name}: bias {:+.4} std {:.4} rmse {rmse:.4}", m - 0.8, var.sqrt());
    }

    // acf slope for d = 0.4, p = 1, N = 2^16, 50 seeds
    let n_big = 1 << 16;
    let model1 = FivarmaModel::new(
        vec![0.4],
        DMatrix::from_row_slice(1, 1, &[1.0]),
        vec![],
        vec![],
    )
    .unwrap();
    let lags: Vec<usize> = vec![32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024];
    let mut mean_gamma = vec![0.0f64; lags.len()];
    let mut mean_g0 = 0.0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        rng.set_stream(seed + 1);
        let (x, _) = fivarma(n_big, &model1, &mut rng).unwrap();
        let v = x.component(0);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let c: Vec<f64> = v.iter().map(|x| x - mean).collect();
        // autocovariance via FFT (convolve with reversal)
        let mut rev = c.clone();
        rev.reverse();
        let full = f64::convolve_full(&c, &rev);
        let center = c.len() - 1;
        mean_g0 += full[center] / n_big as f64;
        for (i, &h) in lags.iter().enumerate() {
            mean_gamma[i] += full[center + h] / n_big as f64;
        }
    }
    let xs: Vec<f64> = lags.iter().map(|&h| (h as f64).ln()).collect();
    let ys: Vec<f64> = mean_gamma.iter().map(|g| (g / 50.0).abs().ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xm).powi(2)).sum::<f64>();
    println!("acf log-log slope: {slope:.4} (target 2d-1 = -0.2), g0 {:.3}", mean_g0 / 50.0);
}
