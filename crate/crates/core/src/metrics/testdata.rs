//! Seeded sample generators shared by the estimator tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn uniform(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// Standard bivariate Gaussian samples with correlation `rho`.
pub fn correlated_gaussians(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            (a, rho * a + c * b)
        })
        .unzip()
}

/// X i.i.d. N(0, 1); Y_t = X_{t−1} + ε_t with ε ~ N(0, noise_var).
pub fn linear_gaussian_process(n: usize, noise_var: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
    let sd = noise_var.sqrt();
    let ys: Vec<f64> = (1..=n)
        .map(|t| xs[t - 1] + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    (xs[1..].to_vec(), ys)
}
