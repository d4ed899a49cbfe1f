//! Run configuration: defaults, an optional TOML file, and command-line flags.
//!
//! Precedence is flag (or its `LEADLAG_*` environment variable) over file over
//! default.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use leadlag_core::{default_a_values, EstimatorConfig, MetricKind, PageRankConfig};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Dot,
    Graphml,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "dot" => Ok(OutputFormat::Dot),
            "graphml" => Ok(OutputFormat::Graphml),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(format!("unknown format '{other}' (json, csv, dot, graphml, svg)")),
        }
    }
}

fn parse_metric(s: &str) -> Result<MetricKind, String> {
    s.parse::<MetricKind>().map_err(|e| e.to_string())
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Input CSV (header row, optional leading ISO date column).
    #[arg(long, env = "LEADLAG_INPUT")]
    pub input: Option<PathBuf>,
    /// TOML config file; flags override its values.
    #[arg(long, env = "LEADLAG_CONFIG")]
    pub config: Option<PathBuf>,
    /// Edge metric: correlation, mi or te. Repeatable.
    #[arg(long = "metric", env = "LEADLAG_METRIC", value_delimiter = ',', value_parser = parse_metric)]
    pub metrics: Vec<MetricKind>,
    #[arg(long, env = "LEADLAG_MAX_LAG")]
    pub max_lag: Option<usize>,
    /// Decay parameter in [0, 1]. Repeatable.
    #[arg(long = "a", env = "LEADLAG_A", value_delimiter = ',')]
    pub a_values: Vec<f64>,
    #[arg(long, env = "LEADLAG_DAMPING")]
    pub damping: Option<f64>,
    #[arg(long, env = "LEADLAG_TOLERANCE")]
    pub tolerance: Option<f64>,
    #[arg(long, env = "LEADLAG_MAX_ITER")]
    pub max_iter: Option<usize>,
    #[arg(long, env = "LEADLAG_K_NEIGHBORS")]
    pub k_neighbors: Option<usize>,
    /// Transfer-entropy history length.
    #[arg(long, env = "LEADLAG_EMBEDDING")]
    pub embedding: Option<usize>,
    #[arg(long, env = "LEADLAG_SEED")]
    pub seed: Option<u64>,
    /// Tie-breaking noise scale, relative to each series' standard deviation.
    #[arg(long, env = "LEADLAG_JITTER")]
    pub jitter: Option<f64>,
    /// Keep negative kNN estimates instead of clipping them to zero.
    #[arg(long, env = "LEADLAG_NO_CLIP")]
    pub no_clip: bool,
    #[arg(long, env = "LEADLAG_OUT")]
    pub out: Option<PathBuf>,
    /// Output format: json, csv, dot, graphml, svg. Repeatable.
    #[arg(long = "format", env = "LEADLAG_FORMAT", value_delimiter = ',')]
    pub formats: Vec<OutputFormat>,
    /// Worker threads for pair estimation (default: all cores).
    #[arg(long, env = "LEADLAG_WORKERS")]
    pub workers: Option<usize>,
}

/// Keys accepted in a config file. All optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    metrics: Option<Vec<MetricKind>>,
    max_lag: Option<usize>,
    a_values: Option<Vec<f64>>,
    damping: Option<f64>,
    tolerance: Option<f64>,
    max_iterations: Option<usize>,
    k_neighbors: Option<usize>,
    embedding: Option<usize>,
    seed: Option<u64>,
    jitter_scale: Option<f64>,
    clip_negative: Option<bool>,
    out: Option<PathBuf>,
    formats: Option<Vec<OutputFormat>>,
    workers: Option<usize>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub metrics: Vec<MetricKind>,
    pub max_lag: usize,
    pub a_values: Vec<f64>,
    /// True when the decay grid came from a flag or file rather than the default.
    #[serde(skip)]
    pub a_values_explicit: bool,
    pub estimator: EstimatorConfig,
    pub pagerank: PageRankConfig,
    #[serde(skip)]
    pub out: PathBuf,
    pub formats: Vec<OutputFormat>,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            metrics: vec![MetricKind::Correlation],
            max_lag: 12,
            a_values: default_a_values(),
            a_values_explicit: false,
            estimator: EstimatorConfig::default(),
            pagerank: PageRankConfig::default(),
            out: PathBuf::from("leadlag-out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg],
            workers: None,
        }
    }
}

fn non_empty<T: Clone>(v: &[T]) -> Option<Vec<T>> {
    (!v.is_empty()).then(|| v.to_vec())
}

fn load_file(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let d = RunConfig::default();

        let a_flag = non_empty(&args.a_values);
        let a_values_explicit = a_flag.is_some() || file.a_values.is_some();
        let cfg = RunConfig {
            input: args.input.clone().or(file.input),
            metrics: non_empty(&args.metrics).or(file.metrics).unwrap_or(d.metrics),
            max_lag: args.max_lag.or(file.max_lag).unwrap_or(d.max_lag),
            a_values: a_flag.or(file.a_values).unwrap_or(d.a_values),
            a_values_explicit,
            estimator: EstimatorConfig {
                k_neighbors: args.k_neighbors.or(file.k_neighbors).unwrap_or(d.estimator.k_neighbors),
                embedding: args.embedding.or(file.embedding).unwrap_or(d.estimator.embedding),
                jitter_scale: args.jitter.or(file.jitter_scale).unwrap_or(d.estimator.jitter_scale),
                seed: args.seed.or(file.seed).unwrap_or(d.estimator.seed),
                clip_negative: if args.no_clip {
                    false
                } else {
                    file.clip_negative.unwrap_or(d.estimator.clip_negative)
                },
            },
            pagerank: PageRankConfig {
                damping: args.damping.or(file.damping).unwrap_or(d.pagerank.damping),
                tolerance: args.tolerance.or(file.tolerance).unwrap_or(d.pagerank.tolerance),
                max_iterations: args
                    .max_iter
                    .or(file.max_iterations)
                    .unwrap_or(d.pagerank.max_iterations),
            },
            out: args.out.clone().or(file.out).unwrap_or(d.out),
            formats: non_empty(&args.formats).or(file.formats).unwrap_or(d.formats),
            workers: args.workers.or(file.workers),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        let usage = |msg: String| -> anyhow::Result<()> { Err(UsageError(msg).into()) };
        if self.metrics.is_empty() {
            return usage("at least one metric is required".into());
        }
        if self.a_values.is_empty() {
            return usage("at least one decay value is required".into());
        }
        if let Some(a) = self.a_values.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return usage(format!("decay value {a} is outside [0, 1]"));
        }
        if let Err(e) = self.estimator.validate() {
            return usage(e.to_string());
        }
        if let Err(e) = self.pagerank.validate() {
            return usage(e.to_string());
        }
        if self.workers == Some(0) {
            return usage("--workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn input(&self) -> anyhow::Result<&Path> {
        match &self.input {
            Some(p) => Ok(p),
            None => bail!(UsageError("--input (or `input` in the config file) is required".into())),
        }
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    /// Metrics in a fixed order without duplicates.
    pub fn metric_list(&self) -> Vec<MetricKind> {
        let mut m = self.metrics.clone();
        m.sort();
        m.dedup();
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(&CommonArgs::default()).unwrap();
        assert_eq!(cfg.max_lag, 12);
        assert_eq!(cfg.a_values.len(), 10);
        assert_eq!(cfg.estimator.k_neighbors, 3);
        assert_eq!(cfg.estimator.embedding, 1);
        assert_eq!(cfg.pagerank.damping, 0.85);
        assert!(!cfg.a_values_explicit);
    }

    #[test]
    fn flags_override_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            file,
            "metrics = [\"mi\", \"te\"]\nmax_lag = 6\nseed = 9\ndamping = 0.5\nclip_negative = false\na_values = [0.5]"
        )
        .unwrap();
        let args = CommonArgs {
            config: Some(file.path().to_owned()),
            max_lag: Some(4),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.max_lag, 4);
        assert_eq!(
            cfg.metrics,
            vec![MetricKind::MutualInformation, MetricKind::TransferEntropy]
        );
        assert_eq!(cfg.estimator.seed, 9);
        assert_eq!(cfg.pagerank.damping, 0.5);
        assert!(!cfg.estimator.clip_negative);
        assert_eq!(cfg.a_values, vec![0.5]);
        assert!(cfg.a_values_explicit);
    }

    #[test]
    fn unknown_file_keys_are_usage_errors() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "lag = 3").unwrap();
        let args = CommonArgs {
            config: Some(file.path().to_owned()),
            ..Default::default()
        };
        let err = RunConfig::resolve(&args).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some(), "{err}");
    }

    #[test]
    fn out_of_range_values_rejected() {
        for args in [
            CommonArgs {
                a_values: vec![1.5],
                ..Default::default()
            },
            CommonArgs {
                damping: Some(1.0),
                ..Default::default()
            },
            CommonArgs {
                k_neighbors: Some(0),
                ..Default::default()
            },
            CommonArgs {
                workers: Some(0),
                ..Default::default()
            },
        ] {
            let err = RunConfig::resolve(&args).unwrap_err();
            assert!(err.downcast_ref::<UsageError>().is_some(), "{err}");
        }
    }
}
