//! Weighted PageRank over aggregated graphs and the decay-parameter sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::netbuild::{aggregate, check_decay, AggregatedGraph, LeadLagGraph, Orientation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Convergence threshold on the L1 change between iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tolerance: 1e-9,
            max_iterations: 1000,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::invalid("damping", format!("{} is outside [0, 1)", self.damping)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

/// Weighted PageRank by power iteration.
///
/// Iterates `PR_t = (1 − d)/N + d Σ_s PR_s w[s][t] / W_s` from the uniform
/// vector, where `W_s` is the total outgoing weight of `s`. Nodes with no
/// outgoing weight spread their mass uniformly over all nodes. A graph without
/// any weight therefore ranks every node `1/N`.
pub fn pagerank(g: &AggregatedGraph, cfg: &PageRankConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let uniform = 1.0 / n as f64;
    let out_weight: Vec<f64> = g.weights().iter().map(|row| row.iter().sum()).collect();
    if out_weight.iter().all(|&w| w == 0.0) {
        return Ok(vec![uniform; n]);
    }
    let transitions: Vec<Vec<(usize, f64)>> = g
        .weights()
        .iter()
        .zip(&out_weight)
        .map(|(row, &total)| {
            row.iter()
                .enumerate()
                .filter(|&(_, &w)| w > 0.0)
                .map(|(t, &w)| (t, w / total))
                .collect()
        })
        .collect();

    let d = cfg.damping;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iterations {
        let dangling: f64 = rank
            .iter()
            .zip(&out_weight)
            .filter(|&(_, &w)| w == 0.0)
            .map(|(r, _)| r)
            .sum();
        next.fill((1.0 - d) * uniform + d * dangling * uniform);
        for (s, links) in transitions.iter().enumerate() {
            let mass = d * rank[s];
            for &(t, p) in links {
                next[t] += mass * p;
            }
        }
        residual = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < cfg.tolerance {
            let total: f64 = rank.iter().sum();
            rank.iter_mut().for_each(|r| *r /= total);
            return Ok(rank);
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        residual,
    })
}

/// PageRank of every variable at every decay value, for one orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationRanking {
    pub orientation: Orientation,
    /// `pagerank[a_index][variable]`.
    pub pagerank: Vec<Vec<f64>>,
    /// Mean over the decay grid, per variable.
    pub average: Vec<f64>,
    /// Variable indices by descending average PageRank (ties by index).
    pub order: Vec<usize>,
    /// Max minus min PageRank across the decay grid, per variable.
    pub spread: Vec<f64>,
}

impl OrientationRanking {
    fn from_rows(orientation: Orientation, pagerank: Vec<Vec<f64>>) -> Self {
        let n = pagerank[0].len();
        let rows = pagerank.len() as f64;
        let average: Vec<f64> = (0..n)
            .map(|v| pagerank.iter().map(|row| row[v]).sum::<f64>() / rows)
            .collect();
        let spread = (0..n)
            .map(|v| {
                let (lo, hi) = pagerank
                    .iter()
                    .map(|row| row[v])
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
                hi - lo
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| average[b].total_cmp(&average[a]).then(a.cmp(&b)));
        Self {
            orientation,
            pagerank,
            average,
            order,
            spread,
        }
    }

    pub fn top(&self) -> usize {
        self.order[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub variables: usize,
    pub max_lag: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub aggregated_nodes: usize,
    pub aggregated_links: usize,
}

/// Influence rankings for one metric across a grid of decay values.
///
/// "Influential" ranks with links pointing at leading variables, "influenced"
/// with links pointing at lagging ones. Both are rankings of association
/// structure, not causal statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub metric: MetricKind,
    pub variables: Vec<String>,
    pub graph: GraphSummary,
    pub pagerank: PageRankConfig,
    pub a_values: Vec<f64>,
    pub influential: OrientationRanking,
    pub influenced: OrientationRanking,
    pub most_influential: String,
    pub most_influenced: String,
}

impl RankingReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// One row per variable × a × orientation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variable,orientation,a,pagerank\n");
        for ranking in [&self.influential, &self.influenced] {
            for (ai, a) in self.a_values.iter().enumerate() {
                for (v, name) in self.variables.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        csv_field(name),
                        ranking.orientation.as_str(),
                        a,
                        ranking.pagerank[ai][v]
                    ));
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// The default decay grid 0.1, 0.2, ..., 1.0.
pub fn default_a_values() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// Aggregates the graph at each decay value and ranks both orientations.
pub fn rank_sweep(graph: &LeadLagGraph, a_values: &[f64], cfg: &PageRankConfig) -> Result<RankingReport> {
    cfg.validate()?;
    if a_values.is_empty() {
        return Err(Error::invalid("a_values", "need at least one decay value"));
    }
    for &a in a_values {
        check_decay(a)?;
    }
    if graph.n_variables() == 0 {
        return Err(Error::EmptyGraph);
    }
    let cells: Vec<Result<(Vec<f64>, Vec<f64>)>> = a_values
        .par_iter()
        .map(|&a| {
            let toward_lead = aggregate(graph, a)?;
            let influential = pagerank(&toward_lead, cfg)?;
            let influenced = pagerank(&toward_lead.reverse(), cfg)?;
            Ok((influential, influenced))
        })
        .collect();
    let mut lead_rows = Vec::with_capacity(cells.len());
    let mut lag_rows = Vec::with_capacity(cells.len());
    for cell in cells {
        let (lead, lag) = cell?;
        lead_rows.push(lead);
        lag_rows.push(lag);
    }
    let influential = OrientationRanking::from_rows(Orientation::TowardLead, lead_rows);
    let influenced = OrientationRanking::from_rows(Orientation::TowardLag, lag_rows);
    let names = graph.variable_names().to_vec();
    let v = names.len();
    Ok(RankingReport {
        metric: graph.metric(),
        most_influential: names[influential.top()].clone(),
        most_influenced: names[influenced.top()].clone(),
        variables: names,
        graph: GraphSummary {
            variables: v,
            max_lag: graph.max_lag(),
            node_count: graph.node_count(),
            edge_count: graph.edge_count(),
            aggregated_nodes: v,
            aggregated_links: v * v.saturating_sub(1),
        },
        pagerank: cfg.clone(),
        a_values: a_values.to_vec(),
        influential,
        influenced,
    })
}
