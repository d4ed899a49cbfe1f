//! The lagged-variable lead-lag graph and its variable-level aggregation.
//!
//! Nodes of the lagged graph are `(variable, lag)` pairs. An edge joins an
//! earlier node `(i, k)` to a later node `(j, m)` whenever `k > m` and
//! `i != j`; it stores the raw metric value and the lag distance, and its
//! weight `raw * a^D` is evaluated on demand for any decay `a`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::LaggedPanel;
use crate::metrics::{EstimatorConfig, MetricKind};

pub mod export;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    pub variable: usize,
    pub lag: usize,
}

impl NodeId {
    pub fn new(variable: usize, lag: usize) -> Self {
        Self { variable, lag }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@lag{}", self.variable, self.lag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadLagEdge {
    /// Earlier node (higher lag).
    pub from: NodeId,
    /// Later node (lower lag).
    pub to: NodeId,
    pub raw: f64,
    pub lag_distance: usize,
}

impl LeadLagEdge {
    pub fn weight(&self, a: f64) -> Result<f64> {
        edge_weight(self.raw, self.lag_distance, a)
    }
}

/// `raw * a^D`: the share of a relation's strength retained over `D` lags.
pub fn edge_weight(raw: f64, lag_distance: usize, a: f64) -> Result<f64> {
    check_decay(a)?;
    if lag_distance == 0 {
        return Err(Error::invalid("lag distance", "must be at least 1"));
    }
    if raw.is_nan() || raw < 0.0 {
        return Err(Error::invalid("raw metric value", format!("{raw} is negative")));
    }
    Ok(raw * a.powi(lag_distance as i32))
}

pub(crate) fn check_decay(a: f64) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::invalid("a", format!("{a} is outside [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadLagGraph {
    variable_names: Vec<String>,
    max_lag: usize,
    metric: MetricKind,
    config: EstimatorConfig,
    edges: Vec<LeadLagEdge>,
}

impl LeadLagGraph {
    /// Assembles a graph from stored parts, checking every edge invariant.
    /// Edges are kept sorted by `(from, to)`.
    pub fn from_parts(
        variable_names: Vec<String>,
        max_lag: usize,
        metric: MetricKind,
        config: EstimatorConfig,
        mut edges: Vec<LeadLagEdge>,
    ) -> Result<Self> {
        let v = variable_names.len();
        for e in &edges {
            let ok = e.from.variable < v
                && e.to.variable < v
                && e.from.variable != e.to.variable
                && e.from.lag <= max_lag
                && e.from.lag > e.to.lag
                && e.lag_distance == e.from.lag - e.to.lag
                && e.raw >= 0.0
                && e.raw.is_finite();
            if !ok {
                return Err(Error::Format(format!(
                    "inadmissible edge {} -> {} (raw {}, D {})",
                    e.from, e.to, e.raw, e.lag_distance
                )));
            }
        }
        edges.sort_by_key(|e| (e.from, e.to));
        if edges.windows(2).any(|w| (w[0].from, w[0].to) == (w[1].from, w[1].to)) {
            return Err(Error::Format("duplicate edge".into()));
        }
        Ok(Self {
            variable_names,
            max_lag,
            metric,
            config,
            edges,
        })
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn n_variables(&self) -> usize {
        self.variable_names.len()
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn edges(&self) -> &[LeadLagEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.n_variables() * (self.max_lag + 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_variables()).flat_map(move |i| (0..=self.max_lag).map(move |k| NodeId::new(i, k)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `var@lagK` label used by the exporters.
    pub fn node_label(&self, id: NodeId) -> String {
        format!("{}@lag{}", self.variable_names[id.variable], id.lag)
    }

    pub fn with_raws_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.raw *= c;
        }
        out
    }
}

/// Every ordered pair `(i, k) -> (j, m)` with `k > m` and `i != j`, sorted.
pub fn admissible_pairs(n_variables: usize, max_lag: usize) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for i in 0..n_variables {
        for k in 1..=max_lag {
            for j in (0..n_variables).filter(|&j| j != i) {
                for m in 0..k {
                    out.push((NodeId::new(i, k), NodeId::new(j, m)));
                }
            }
        }
    }
    out
}

/// Evaluates the metric on every admissible pair and keeps the edges with a
/// positive raw value. Pairs are estimated in parallel; the result does not
/// depend on the worker count.
pub fn build_lead_lag_graph(panel: &LaggedPanel, metric: MetricKind, cfg: &EstimatorConfig) -> Result<LeadLagGraph> {
    cfg.validate()?;
    let pairs = admissible_pairs(panel.n_variables(), panel.max_lag());
    let results: Vec<Result<Option<LeadLagEdge>>> = pairs
        .par_iter()
        .map(|&(from, to)| {
            let annotate = |source: Error| Error::Pair {
                from,
                to,
                source: Box::new(source),
            };
            let pair = panel.align_pair(from, to).map_err(annotate)?;
            let raw = metric.evaluate(&pair, cfg).map_err(annotate)?;
            Ok((raw > 0.0).then_some(LeadLagEdge {
                from,
                to,
                raw,
                lag_distance: from.lag - to.lag,
            }))
        })
        .collect();

    let mut edges = Vec::with_capacity(results.len());
    for r in results {
        if let Some(e) = r? {
            edges.push(e);
        }
    }
    Ok(LeadLagGraph {
        variable_names: panel.base().variable_names().to_vec(),
        max_lag: panel.max_lag(),
        metric,
        config: cfg.clone(),
        edges,
    })
}

/// Direction of the variable-level links PageRank walks along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Links point at the leading (earlier) variable of each relation.
    #[serde(rename = "toward-lead")]
    TowardLead,
    /// Links point at the lagging (later) variable of each relation.
    #[serde(rename = "toward-lag")]
    TowardLag,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::TowardLead => Orientation::TowardLag,
            Orientation::TowardLag => Orientation::TowardLead,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::TowardLead => "toward-lead",
            Orientation::TowardLag => "toward-lag",
        }
    }
}

/// Variable-level graph: `weights[s][t]` is the weight of the link `s -> t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedGraph {
    variable_names: Vec<String>,
    weights: Vec<Vec<f64>>,
    orientation: Orientation,
}

impl AggregatedGraph {
    pub fn from_weights(variable_names: Vec<String>, weights: Vec<Vec<f64>>, orientation: Orientation) -> Result<Self> {
        let n = variable_names.len();
        if weights.len() != n || weights.iter().any(|row| row.len() != n) {
            return Err(Error::Format(format!("weight matrix must be {n}x{n}")));
        }
        for (s, row) in weights.iter().enumerate() {
            for (t, &w) in row.iter().enumerate() {
                if !(w >= 0.0 && w.is_finite()) {
                    return Err(Error::Format(format!(
                        "weight [{s}][{t}] = {w} is not a finite non-negative number"
                    )));
                }
                if s == t && w != 0.0 {
                    return Err(Error::Format(format!("diagonal weight [{s}][{s}] must be zero")));
                }
            }
        }
        Ok(Self {
            variable_names,
            weights,
            orientation,
        })
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from][to]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of ordered off-diagonal pairs, i.e. directed links.
    pub fn link_count(&self) -> usize {
        self.n() * self.n().saturating_sub(1)
    }

    pub fn nonzero_link_count(&self) -> usize {
        self.weights
            .iter()
            .flat_map(|row| row.iter())
            .filter(|&&w| w > 0.0)
            .count()
    }

    /// Transposes every link and flips the orientation; weights are unchanged.
    pub fn reverse(&self) -> Self {
        let n = self.n();
        let weights = (0..n).map(|s| (0..n).map(|t| self.weights[t][s]).collect()).collect();
        Self {
            variable_names: self.variable_names.clone(),
            weights,
            orientation: self.orientation.flipped(),
        }
    }
}

pub fn reverse(g: &AggregatedGraph) -> AggregatedGraph {
    g.reverse()
}

/// Merges all lags of each variable and sums the decayed edge weights.
///
/// A lagged edge `(i, k) -> (j, m)` says `i` leads `j`, so it contributes
/// `raw * a^D` to the toward-lead link `j -> i`. Edges are folded in their
/// sorted order.
pub fn aggregate(graph: &LeadLagGraph, a: f64) -> Result<AggregatedGraph> {
    check_decay(a)?;
    let n = graph.n_variables();
    let mut weights = vec![vec![0.0; n]; n];
    for e in graph.edges() {
        weights[e.to.variable][e.from.variable] += e.weight(a)?;
    }
    Ok(AggregatedGraph {
        variable_names: graph.variable_names.clone(),
        weights,
        orientation: Orientation::TowardLead,
    })
}
