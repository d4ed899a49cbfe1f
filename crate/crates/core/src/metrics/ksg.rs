//! Kraskov–Stögbauer–Grassberger mutual information (first estimator).

use crate::error::{Error, Result};
use crate::ingest::AlignedPair;

use super::digamma::digamma_unchecked;
use super::jitter::{jittered, JitterKey};
use super::neighbors::{kth_neighbor_distances, neighbor_counts, neighbor_counts_1d};
use super::{check_len, EstimatorConfig};

/// KSG estimate of I(A; B) in nats, without jitter or clipping.
///
/// `a` and `b` are coordinate columns of the two blocks. The k-th neighbor
/// distance ε_i is taken in the joint space under the max norm; marginal
/// counts include points strictly closer than ε_i in each block:
///
/// ψ(k) + ψ(n) − ⟨ψ(n_a + 1) + ψ(n_b + 1)⟩
pub fn ksg_estimate(a: &[&[f64]], b: &[&[f64]], k: usize) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("blocks", "both blocks need at least one coordinate"));
    }
    let n = a[0].len();
    if k == 0 {
        return Err(Error::invalid("k_neighbors", "must be at least 1"));
    }
    if n < k + 1 {
        return Err(Error::InsufficientSamples { needed: k + 1, got: n });
    }
    let joint: Vec<&[f64]> = a.iter().chain(b).copied().collect();
    let eps = kth_neighbor_distances(&joint, k)?;
    let na = marginal_counts(a, &eps)?;
    let nb = marginal_counts(b, &eps)?;
    let mut acc = 0.0;
    for (ca, cb) in na.iter().zip(&nb) {
        acc += digamma_unchecked((ca + 1) as f64) + digamma_unchecked((cb + 1) as f64);
    }
    Ok(digamma_unchecked(k as f64) + digamma_unchecked(n as f64) - acc / n as f64)
}

fn marginal_counts(cols: &[&[f64]], radii: &[f64]) -> Result<Vec<usize>> {
    match cols {
        [single] => neighbor_counts_1d(single, radii),
        _ => neighbor_counts(cols, radii),
    }
}

pub(crate) fn finish(estimate: f64, cfg: &EstimatorConfig) -> f64 {
    if cfg.clip_negative {
        estimate.max(0.0)
    } else {
        estimate
    }
}

/// Mutual information of an aligned pair of lag views, in nats.
///
/// Jitter is keyed by each side's node id and base-time index, so swapping the
/// pair gives a bit-identical result.
pub fn ksg_mutual_information(pair: &AlignedPair<'_>, cfg: &EstimatorConfig) -> Result<f64> {
    cfg.validate()?;
    let xs = jittered(
        pair.xs,
        cfg.seed,
        JitterKey::new(pair.x_id.variable, pair.x_id.lag),
        pair.x_start,
        cfg.jitter_scale,
    );
    let ys = jittered(
        pair.ys,
        cfg.seed,
        JitterKey::new(pair.y_id.variable, pair.y_id.lag),
        pair.y_start,
        cfg.jitter_scale,
    );
    mi_of_jittered(&xs, &ys, cfg)
}

/// Mutual information of two plain sample vectors, in nats. Jitter is keyed
/// by the sample content.
pub fn mutual_information(xs: &[f64], ys: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    cfg.validate()?;
    check_len(xs, ys)?;
    let jx = jittered(xs, cfg.seed, JitterKey::from_content(xs), 0, cfg.jitter_scale);
    let jy = jittered(ys, cfg.seed, JitterKey::from_content(ys), 0, cfg.jitter_scale);
    mi_of_jittered(&jx, &jy, cfg)
}

fn mi_of_jittered(xs: &[f64], ys: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    check_len(xs, ys)?;
    let n = xs.len();
    if n <= cfg.k_neighbors {
        return Err(Error::InsufficientSamples {
            needed: cfg.k_neighbors + 1,
            got: n,
        });
    }
    Ok(finish(ksg_estimate(&[xs], &[ys], cfg.k_neighbors)?, cfg))
}
