//! kNN transfer entropy as a difference of two KSG mutual informations:
//!
//! T(X→Y) = I(Y_t ; [X_{t−l..t−1}, Y_{t−l..t−1}]) − I(Y_t ; Y_{t−l..t−1})

use crate::error::{Error, Result};
use crate::ingest::AlignedPair;

use super::jitter::{jittered, JitterKey};
use super::ksg::{finish, ksg_estimate};
use super::{check_len, EstimatorConfig};

/// Transfer entropy from `source` to `target` (time-aligned), in nats.
pub fn transfer_entropy(source: &[f64], target: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    cfg.validate()?;
    check_len(source, target)?;
    let src = jittered(source, cfg.seed, JitterKey::from_content(source), 0, cfg.jitter_scale);
    let tgt = jittered(target, cfg.seed, JitterKey::from_content(target), 0, cfg.jitter_scale);
    te_of_jittered(&src, &tgt, cfg)
}

/// Transfer entropy from the pair's `xs` view to its `ys` view.
pub fn transfer_entropy_pair(pair: &AlignedPair<'_>, cfg: &EstimatorConfig) -> Result<f64> {
    cfg.validate()?;
    let src = jittered(
        pair.xs,
        cfg.seed,
        JitterKey::new(pair.x_id.variable, pair.x_id.lag),
        pair.x_start,
        cfg.jitter_scale,
    );
    let tgt = jittered(
        pair.ys,
        cfg.seed,
        JitterKey::new(pair.y_id.variable, pair.y_id.lag),
        pair.y_start,
        cfg.jitter_scale,
    );
    te_of_jittered(&src, &tgt, cfg)
}

fn te_of_jittered(src: &[f64], tgt: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    check_len(src, tgt)?;
    let n = src.len();
    let l = cfg.embedding;
    let needed = cfg.k_neighbors + l + 2;
    if n < needed {
        return Err(Error::InsufficientSamples { needed, got: n });
    }
    let future = &tgt[l..];
    let src_past: Vec<&[f64]> = (1..=l).map(|j| &src[l - j..n - j]).collect();
    let tgt_past: Vec<&[f64]> = (1..=l).map(|j| &tgt[l - j..n - j]).collect();
    let joint_past: Vec<&[f64]> = src_past.iter().chain(&tgt_past).copied().collect();

    let with_source = ksg_estimate(&[future], &joint_past, cfg.k_neighbors)?;
    let own_past = ksg_estimate(&[future], &tgt_past, cfg.k_neighbors)?;
    Ok(finish(with_source - own_past, cfg))
}
