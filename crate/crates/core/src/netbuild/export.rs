//! DOT, GraphML and JSON serialization of both graph layers.
//!
//! Lagged-graph nodes are labelled `name@lagK` and edges carry `raw`, `D` and
//! `weight` (evaluated at the caller's `a`). Aggregated-graph nodes are labelled
//! with the variable name and edges carry `weight`; every ordered pair of
//! distinct variables is written, including zero-weight links. JSON exports can
//! be read back with [`lagged_from_json`] and [`aggregated_from_json`].

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{EstimatorConfig, MetricKind};

use super::{check_decay, AggregatedGraph, LeadLagEdge, LeadLagGraph, NodeId, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
    Json,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Json => "json",
        }
    }
}

pub fn export_lagged(graph: &LeadLagGraph, a: f64, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Dot => lagged_to_dot(graph, a),
        GraphFormat::GraphMl => lagged_to_graphml(graph, a),
        GraphFormat::Json => lagged_to_json(graph, a),
    }
}

pub fn export_aggregated(graph: &AggregatedGraph, a: f64, format: GraphFormat) -> Result<String> {
    check_decay(a)?;
    match format {
        GraphFormat::Dot => Ok(aggregated_to_dot(graph, a)),
        GraphFormat::GraphMl => Ok(aggregated_to_graphml(graph, a)),
        GraphFormat::Json => aggregated_to_json(graph, a),
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn lagged_to_dot(graph: &LeadLagGraph, a: f64) -> Result<String> {
    check_decay(a)?;
    let mut out = String::new();
    writeln!(out, "digraph lead_lag {{").unwrap();
    writeln!(out, "  // metric={} a={}", graph.metric(), a).unwrap();
    for id in graph.nodes() {
        writeln!(out, "  {};", dot_id(&graph.node_label(id))).unwrap();
    }
    for e in graph.edges() {
        writeln!(
            out,
            "  {} -> {} [raw={}, D={}, weight={}];",
            dot_id(&graph.node_label(e.from)),
            dot_id(&graph.node_label(e.to)),
            e.raw,
            e.lag_distance,
            e.weight(a)?
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn aggregated_to_dot(graph: &AggregatedGraph, a: f64) -> String {
    let names = graph.variable_names();
    let mut out = String::new();
    writeln!(out, "digraph aggregated {{").unwrap();
    writeln!(out, "  // orientation={} a={}", graph.orientation().as_str(), a).unwrap();
    for name in names {
        writeln!(out, "  {};", dot_id(name)).unwrap();
    }
    for s in 0..graph.n() {
        for t in (0..graph.n()).filter(|&t| t != s) {
            writeln!(
                out,
                "  {} -> {} [weight={}];",
                dot_id(&names[s]),
                dot_id(&names[t]),
                graph.weight(s, t)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

const GRAPHML_HEADER: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">
"#;

pub fn lagged_to_graphml(graph: &LeadLagGraph, a: f64) -> Result<String> {
    check_decay(a)?;
    let mut out = String::from(GRAPHML_HEADER);
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"variable\" for=\"node\" attr.name=\"variable\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"lag\" for=\"node\" attr.name=\"lag\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"raw\" for=\"edge\" attr.name=\"raw\" attr.type=\"double\"/>\n");
    out.push_str("  <key id=\"D\" for=\"edge\" attr.name=\"D\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    writeln!(
        out,
        "  <graph id=\"{}\" edgedefault=\"directed\">",
        xml_escape(&format!("lead_lag_{}_a{}", graph.metric(), a))
    )
    .unwrap();
    let node_key = |id: NodeId| format!("n{}_{}", id.variable, id.lag);
    for id in graph.nodes() {
        writeln!(out, "    <node id=\"{}\">", node_key(id)).unwrap();
        writeln!(
            out,
            "      <data key=\"label\">{}</data>",
            xml_escape(&graph.node_label(id))
        )
        .unwrap();
        writeln!(
            out,
            "      <data key=\"variable\">{}</data>",
            xml_escape(&graph.variable_names()[id.variable])
        )
        .unwrap();
        writeln!(out, "      <data key=\"lag\">{}</data>", id.lag).unwrap();
        out.push_str("    </node>\n");
    }
    for e in graph.edges() {
        writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\">",
            node_key(e.from),
            node_key(e.to)
        )
        .unwrap();
        writeln!(out, "      <data key=\"raw\">{}</data>", e.raw).unwrap();
        writeln!(out, "      <data key=\"D\">{}</data>", e.lag_distance).unwrap();
        writeln!(out, "      <data key=\"weight\">{}</data>", e.weight(a)?).unwrap();
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    Ok(out)
}

pub fn aggregated_to_graphml(graph: &AggregatedGraph, a: f64) -> String {
    let mut out = String::from(GRAPHML_HEADER);
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    writeln!(
        out,
        "  <graph id=\"aggregated_{}_a{}\" edgedefault=\"directed\">",
        graph.orientation().as_str(),
        a
    )
    .unwrap();
    for (i, name) in graph.variable_names().iter().enumerate() {
        writeln!(
            out,
            "    <node id=\"n{i}\">\n      <data key=\"label\">{}</data>\n    </node>",
            xml_escape(name)
        )
        .unwrap();
    }
    for s in 0..graph.n() {
        for t in (0..graph.n()).filter(|&t| t != s) {
            writeln!(
                out,
                "    <edge source=\"n{s}\" target=\"n{t}\">\n      <data key=\"weight\">{}</data>\n    </edge>",
                graph.weight(s, t)
            )
            .unwrap();
        }
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonNode {
    id: String,
    variable: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lag: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonLaggedEdge {
    source: String,
    target: String,
    from: NodeId,
    to: NodeId,
    raw: f64,
    #[serde(rename = "D")]
    lag_distance: usize,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonLagged {
    layer: String,
    metric: MetricKind,
    a: f64,
    max_lag: usize,
    variables: Vec<String>,
    config: EstimatorConfig,
    node_count: usize,
    edge_count: usize,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonLaggedEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonAggregatedEdge {
    source: String,
    target: String,
    from: usize,
    to: usize,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonAggregated {
    layer: String,
    orientation: Orientation,
    a: f64,
    variables: Vec<String>,
    node_count: usize,
    edge_count: usize,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonAggregatedEdge>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn lagged_to_json(graph: &LeadLagGraph, a: f64) -> Result<String> {
    check_decay(a)?;
    let nodes = graph
        .nodes()
        .map(|id| JsonNode {
            id: graph.node_label(id),
            variable: id.variable,
            lag: Some(id.lag),
        })
        .collect();
    let edges = graph
        .edges()
        .iter()
        .map(|e| {
            Ok(JsonLaggedEdge {
                source: graph.node_label(e.from),
                target: graph.node_label(e.to),
                from: e.from,
                to: e.to,
                raw: e.raw,
                lag_distance: e.lag_distance,
                weight: e.weight(a)?,
            })
        })
        .collect::<Result<_>>()?;
    to_json(&JsonLagged {
        layer: "lagged".into(),
        metric: graph.metric(),
        a,
        max_lag: graph.max_lag(),
        variables: graph.variable_names().to_vec(),
        config: graph.config().clone(),
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        nodes,
        edges,
    })
}

pub fn aggregated_to_json(graph: &AggregatedGraph, a: f64) -> Result<String> {
    let names = graph.variable_names();
    let nodes = names
        .iter()
        .enumerate()
        .map(|(i, name)| JsonNode {
            id: name.clone(),
            variable: i,
            lag: None,
        })
        .collect();
    let mut edges = Vec::with_capacity(graph.link_count());
    for s in 0..graph.n() {
        for t in (0..graph.n()).filter(|&t| t != s) {
            edges.push(JsonAggregatedEdge {
                source: names[s].clone(),
                target: names[t].clone(),
                from: s,
                to: t,
                weight: graph.weight(s, t),
            });
        }
    }
    to_json(&JsonAggregated {
        layer: "aggregated".into(),
        orientation: graph.orientation(),
        a,
        variables: names.to_vec(),
        node_count: graph.n(),
        edge_count: edges.len(),
        nodes,
        edges,
    })
}

pub fn lagged_from_json(text: &str) -> Result<LeadLagGraph> {
    let doc: JsonLagged = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.layer != "lagged" {
        return Err(Error::Format(format!(
            "expected a lagged graph, found layer '{}'",
            doc.layer
        )));
    }
    let edges = doc
        .edges
        .into_iter()
        .map(|e| LeadLagEdge {
            from: e.from,
            to: e.to,
            raw: e.raw,
            lag_distance: e.lag_distance,
        })
        .collect();
    LeadLagGraph::from_parts(doc.variables, doc.max_lag, doc.metric, doc.config, edges)
}

pub fn aggregated_from_json(text: &str) -> Result<AggregatedGraph> {
    let doc: JsonAggregated = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.layer != "aggregated" {
        return Err(Error::Format(format!(
            "expected an aggregated graph, found layer '{}'",
            doc.layer
        )));
    }
    let n = doc.variables.len();
    let mut weights = vec![vec![0.0; n]; n];
    for e in doc.edges {
        if e.from >= n || e.to >= n {
            return Err(Error::Format(format!("edge {} -> {} out of range", e.from, e.to)));
        }
        weights[e.from][e.to] = e.weight;
    }
    AggregatedGraph::from_weights(doc.variables, weights, doc.orientation)
}
