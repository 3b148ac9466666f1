//! Scratch Monte Carlo probe for the reproduction targets (not part of the
//! test suite; run with --release).

use longmem::sim::{fivarma, FivarmaModel};
use longmem::wavelet::{scaling_filter, WaveletFamily};
use longmem::whittle::fourier::{mfw, PhaseMode};
use longmem::whittle::wavelet::{mww, ScaleRange};
use longmem::MultiSeries;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn stats(estimates: &[Vec<f64>], truth: &[f64]) -> Vec<(f64, f64, f64)> {
    let p = truth.len();
    let reps = estimates.len() as f64;
    (0..p)
        .map(|l| {
            let mean = estimates.iter().map(|e| e[l]).sum::<f64>() / reps;
            let bias = mean - truth[l];
            let var = estimates.iter().map(|e| (e[l] - mean).powi(2)).sum::<f64>() / (reps - 1.0);
            let std = var.sqrt();
            (bias, std, (bias * bias + var).sqrt())
        })
        .collect()
}

fn main() {
    let reps = 500usize;
    let n = 512usize;
    let rho = 0.8;
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);

    for (d1, d2, j0, label) in [
        (0.2f64, 0.4f64, 1usize, "table1 d=(0.2,0.4) j0=1"),
        (1.2, 1.4, 2, "table5 d=(1.2,1.4) j0=2"),
    ] {
        let model = FivarmaModel::new(vec![d1, d2], sigma.clone(), vec![], vec![]).unwrap();
        let filter = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let mut ests = Vec::new();
        let mut omegas: Vec<DMatrix<f64>> = Vec::new();
        let mut corrs = Vec::new();
        for r in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(1234);
            rng.set_stream(r as u64 + 1);
            let (x, _) = fivarma(n, &model, &mut rng).unwrap();
            let range = ScaleRange::new(j0, 9).unwrap();
            let est = mww(&x, &filter, range).unwrap();
            ests.push(est.estimate.d.iter().copied().collect());
            corrs.push(est.estimate.correlation()[(0, 1)]);
            omegas.push(est.estimate.cov.clone());
        }
        let s = stats(&ests, &[d1, d2]);
        println!("== MWW {label}");
        for (l, (bias, std, rmse)) in s.iter().enumerate() {
            println!("  d{}: bias {bias:+.4} std {std:.4} rmse {rmse:.4}", l + 1);
        }
        let mean_omega = omegas.iter().fold(DMatrix::zeros(2, 2), |a, b| a + b) / reps as f64;
        println!(
            "  mean omega [[{:.4}, {:.4}],[.., {:.4}]] (truth [[1,0.8],[..,1]])",
            mean_omega[(0, 0)],
            mean_omega[(0, 1)],
            mean_omega[(1, 1)]
        );
        let mc = corrs.iter().sum::<f64>() / reps as f64;
        let cv =
            corrs.iter().map(|c| (c - mc).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
        println!(
            "  correlation bias {:+.4} std {:.4} rmse {:.4}",
            mc - rho,
            cv.sqrt(),
            ((mc - rho).powi(2) + cv).sqrt()
        );
    }

    // MFW at m = 57
    let model = FivarmaModel::new(vec![0.2, 0.4], sigma.clone(), vec![], vec![]).unwrap();
    let mut ests = Vec::new();
    let mut omegas: Vec<DMatrix<f64>> = Vec::new();
    for r in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        rng.set_stream(r as u64 + 1);
        let (x, _) = fivarma(n, &model, &mut rng).unwrap();
        let est = mfw(&x, 57, PhaseMode::SecondOrder).unwrap();
        ests.push(est.d.iter().copied().collect());
        omegas.push(est.cov.clone());
    }
    let s = stats(&ests, &[0.2, 0.4]);
    println!("== MFW table6 d=(0.2,0.4) m=57");
    for (l, (bias, std, rmse)) in s.iter().enumerate() {
        println!("  d{}: bias {bias:+.4} std {std:.4} rmse {rmse:.4}", l + 1);
    }
    let mean_omega = omegas.iter().fold(DMatrix::zeros(2, 2), |a, b| a + b) / reps as f64;
    println!(
        "  mean omega [[{:.4}, {:.4}],[.., {:.4}]] (truth [[1,0.8],[..,1]])",
        mean_omega[(0, 0)],
        mean_omega[(0, 1)],
        mean_omega[(1, 1)]
    );

    // univariate MWW (single component) for the M/U ratio, d=(0.2,0.4)
    let model = FivarmaModel::new(vec![0.2, 0.4], sigma, vec![], vec![]).unwrap();
    let filter = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
    let mut uni = Vec::new();
    for r in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        rng.set_stream(r as u64 + 1);
        let (x, _) = fivarma(n, &model, &mut rng).unwrap();
        let range = ScaleRange::new(1, 9).unwrap();
        let mut row = Vec::new();
        for l in 0..2 {
            let col = MultiSeries::from_columns(&[x.component(l)]).unwrap();
            let est = mww(&col, &filter, range).unwrap();
            row.push(est.estimate.d[0]);
        }
        uni.push(row);
    }
    let su = stats(&uni, &[0.2, 0.4]);
    println!("== univariate MWW d=(0.2,0.4) j0=1");
    for (l, (bias, std, rmse)) in su.iter().enumerate() {
        println!("  d{}: bias {bias:+.4} std {std:.4} rmse {rmse:.4}", l + 1);
    }
}
