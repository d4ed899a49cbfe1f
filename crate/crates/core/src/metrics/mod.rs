//! Pairwise dependence estimators and their numerical substrate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::AlignedPair;

mod correlation;
mod digamma;
mod jitter;
mod ksg;
pub mod neighbors;
mod transfer;

#[cfg(test)]
pub(crate) mod testdata;

pub use correlation::{abs_correlation, pearson_abs};
pub use digamma::digamma;
pub use jitter::{jittered, JitterKey};
pub use ksg::{ksg_estimate, ksg_mutual_information, mutual_information};
pub use neighbors::{neighbor_counts, neighbor_counts_1d};
pub use transfer::{transfer_entropy, transfer_entropy_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "correlation")]
    Correlation,
    #[serde(rename = "mi")]
    MutualInformation,
    #[serde(rename = "te")]
    TransferEntropy,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::Correlation,
        MetricKind::MutualInformation,
        MetricKind::TransferEntropy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Correlation => "correlation",
            MetricKind::MutualInformation => "mi",
            MetricKind::TransferEntropy => "te",
        }
    }

    /// Raw value of the metric on an aligned pair. For transfer entropy the
    /// pair's `xs` side is the source.
    pub fn evaluate(self, pair: &AlignedPair<'_>, cfg: &EstimatorConfig) -> Result<f64> {
        match self {
            MetricKind::Correlation => pearson_abs(pair),
            MetricKind::MutualInformation => ksg_mutual_information(pair, cfg),
            MetricKind::TransferEntropy => transfer_entropy_pair(pair, cfg),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "correlation" | "corr" => Ok(MetricKind::Correlation),
            "mi" | "mutual-information" => Ok(MetricKind::MutualInformation),
            "te" | "transfer-entropy" => Ok(MetricKind::TransferEntropy),
            other => Err(Error::invalid("metric", format!("unknown metric '{other}'"))),
        }
    }
}

/// Settings shared by the kNN estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub k_neighbors: usize,
    /// Transfer-entropy history length `l`.
    pub embedding: usize,
    pub jitter_scale: f64,
    pub seed: u64,
    pub clip_negative: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 3,
            embedding: 1,
            jitter_scale: 1e-10,
            seed: 0,
            clip_negative: true,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::invalid("k_neighbors", "must be at least 1"));
        }
        if self.embedding == 0 {
            return Err(Error::invalid("embedding", "must be at least 1"));
        }
        if !(self.jitter_scale >= 0.0 && self.jitter_scale.is_finite()) {
            return Err(Error::invalid("jitter_scale", "must be finite and non-negative"));
        }
        Ok(())
    }
}

pub(crate) fn check_len(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    Ok(())
}
