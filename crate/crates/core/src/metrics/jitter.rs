//! Deterministic tie-breaking noise for the kNN estimators.
//!
//! Noise for sample `q` of a series is a function of `(seed, variable, lag, q)`
//! only: a ChaCha8 stream is keyed by the first three and positioned at word
//! `4q`, so the same sample always receives the same perturbation no matter
//! which pair it appears in or which thread evaluates it.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies the series a block of samples belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JitterKey {
    pub variable: u64,
    pub lag: u64,
}

impl JitterKey {
    pub fn new(variable: usize, lag: usize) -> Self {
        Self {
            variable: variable as u64,
            lag: lag as u64,
        }
    }

    /// Key derived from the sample values themselves, for series that carry no
    /// panel identity. Equal inputs get equal keys, which keeps estimators that
    /// are symmetric in their arguments exactly symmetric.
    pub fn from_content(values: &[f64]) -> Self {
        // FNV-1a over the IEEE bit patterns.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in values {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        Self {
            variable: h,
            lag: u64::MAX,
        }
    }
}

fn stream(seed: u64, key: JitterKey) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&key.variable.to_le_bytes());
    bytes[16..24].copy_from_slice(&key.lag.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller on two 53-bit uniforms; u1 is in (0, 1].
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64;
    let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Returns `values` plus Gaussian noise of standard deviation
/// `scale * sd(values)` (or `scale` for a constant series). `start` is the
/// sample index of `values[0]` within the keyed series.
pub fn jittered(values: &[f64], seed: u64, key: JitterKey, start: usize, scale: f64) -> Vec<f64> {
    if scale == 0.0 {
        return values.to_vec();
    }
    let sd = sample_sd(values);
    let magnitude = scale * if sd > 0.0 && sd.is_finite() { sd } else { 1.0 };
    let mut rng = stream(seed, key);
    rng.set_word_pos(4 * start as u128);
    values
        .iter()
        .map(|v| v + magnitude * standard_normal(&mut rng))
        .collect()
}

fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}
