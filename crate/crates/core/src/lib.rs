//! Lead-lag networks over lagged multivariate time series.
//!
//! The pipeline: [`ingest`] loads raw levels, converts them to rates of change
//! and exposes every lag of every variable; [`metrics`] scores pairs of lagged
//! series (absolute correlation, kNN mutual information, kNN transfer entropy);
//! [`netbuild`] turns the scores into a lagged lead-lag graph and merges it
//! into a variable-level graph for a decay parameter `a`; [`rank`] runs weighted
//! PageRank over both link orientations.

pub mod error;
pub mod ingest;
pub mod metrics;
pub mod netbuild;
pub mod rank;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
pub use ingest::{
    align_pair, build_lags, load_csv, parse_csv, rate_of_change, AlignedPair, CsvOptions, DateColumn, LaggedPanel,
    ReturnsTable, TimeSeriesTable,
};
pub use metrics::{EstimatorConfig, MetricKind};
pub use netbuild::{
    aggregate, build_lead_lag_graph, edge_weight, reverse, AggregatedGraph, LeadLagEdge, LeadLagGraph, NodeId,
    Orientation,
};
pub use rank::{default_a_values, pagerank, rank_sweep, PageRankConfig, RankingReport};
