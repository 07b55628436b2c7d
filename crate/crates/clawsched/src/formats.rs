//! On-disk formats: network JSON, conflict-graph JSON and edge-list text,
//! claw reports, claw-freeing results and schedules.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clawsched_core::clawfree::TraceStep;
use clawsched_core::schedule::MixedSchedule;
use clawsched_core::{
    ClawFreeResult, ClawReport, ConflictGraph, Edge, Graph, IndependentSet, Network, ScenarioRules, Transceiver, TransceiverId,
    Transmission,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Parents {
    One(TransceiverId),
    Many(Vec<TransceiverId>),
}

impl Parents {
    fn into_vec(self) -> Vec<TransceiverId> {
        match self {
            Parents::One(p) => vec![p],
            Parents::Many(ps) => ps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub rules: ScenarioRules,
    pub transceivers: Vec<Transceiver>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<BTreeMap<TransceiverId, Parents>>,
}

impl NetworkFile {
    /// Transceivers sorted by id; single parents written as scalars.
    pub fn from_network(net: &Network) -> Self {
        let mut transceivers = net.transceivers().to_vec();
        transceivers.sort_by_key(|t| t.id);
        let tree = net.structure().map(|s| {
            s.iter()
                .map(|(&c, ps)| {
                    let p = if ps.len() == 1 {
                        Parents::One(ps[0])
                    } else {
                        Parents::Many(ps.clone())
                    };
                    (c, p)
                })
                .collect()
        });
        NetworkFile {
            rules: *net.rules(),
            transceivers,
            tree,
        }
    }

    pub fn into_network(self) -> CliResult<Network> {
        let tree = self.tree.map(|t| t.into_iter().map(|(c, p)| (c, p.into_vec())).collect());
        Ok(Network::build(self.transceivers, self.rules, tree)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub sender: TransceiverId,
    pub receivers: Vec<TransceiverId>,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictGraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<Edge>,
}

impl ConflictGraphFile {
    pub fn from_graph(cg: &ConflictGraph) -> Self {
        let vertices = cg
            .transmissions()
            .iter()
            .zip(cg.weights())
            .map(|(t, &w)| VertexRecord {
                sender: t.sender,
                receivers: t.receivers.clone(),
                w,
            })
            .collect();
        ConflictGraphFile {
            vertices,
            edges: cg.edges().collect(),
        }
    }

    pub fn into_graph(self) -> CliResult<ConflictGraph> {
        let weights = self.vertices.iter().map(|v| v.w).collect();
        let graph = Graph::from_edges(weights, self.edges.iter().map(|e| (e.0, e.1)))?;
        graph.check_positive_weights()?;
        let transmissions = self
            .vertices
            .into_iter()
            .map(|v| Transmission::new(v.sender, v.receivers))
            .collect();
        Ok(ConflictGraph::from_parts(transmissions, graph)?)
    }
}

/// `p <n> <m>` then one `e u v` line per edge, 0-based.
pub fn edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.len(), g.edge_count());
    for Edge(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

/// Reads the edge-list text back with unit weights.
pub fn parse_edge_list(text: &str) -> CliResult<Graph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c'));
    let header = lines.next().ok_or_else(|| CliError::Invalid("empty edge list".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match parts.as_slice() {
        ["p", n, m] => (parse_num(n)?, parse_num(m)?),
        _ => return Err(CliError::Invalid(format!("bad header line {header:?}"))),
    };
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["e", u, v] => edges.push((parse_num(u)?, parse_num(v)?)),
            _ => return Err(CliError::Invalid(format!("bad edge line {line:?}"))),
        }
    }
    if edges.len() != m {
        return Err(CliError::Invalid(format!("header says {m} edges, found {}", edges.len())));
    }
    Ok(Graph::from_edges(vec![1.0; n], edges)?)
}

fn parse_num(s: &str) -> CliResult<usize> {
    s.parse().map_err(|_| CliError::Invalid(format!("not a count: {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionRow {
    pub id: TransceiverId,
    pub x: f64,
    pub y: f64,
    pub weight: u64,
}

pub fn attribution_rows(report: &ClawReport, net: &Network) -> Vec<AttributionRow> {
    report
        .attribution
        .iter()
        .map(|(&id, &weight)| {
            let (x, y) = net.position(id);
            AttributionRow { id, x, y, weight }
        })
        .collect()
}

pub fn attribution_csv(rows: &[AttributionRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["id", "x", "y", "weight"])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error().to_string()))?).unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClawFreeFile {
    pub claws_before: u64,
    pub added_edges: Vec<Edge>,
    pub iterations: usize,
    pub escape_count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
}

impl ClawFreeFile {
    pub fn new(claws_before: u64, r: &ClawFreeResult) -> Self {
        ClawFreeFile {
            claws_before,
            added_edges: r.added_edges.clone(),
            iterations: r.iterations,
            escape_count: r.escape_count,
            trace: r.trace.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleMember {
    pub sender: TransceiverId,
    pub receivers: Vec<TransceiverId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub algorithm: String,
    pub members: Vec<ScheduleMember>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub added_edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2_claw_free: Option<bool>,
}

impl ScheduleFile {
    pub fn new(algorithm: &str, cg: &ConflictGraph, set: &IndependentSet) -> Self {
        let members = set
            .members
            .iter()
            .map(|&v| {
                let t = cg.transmission(v);
                ScheduleMember {
                    sender: t.sender,
                    receivers: t.receivers.clone(),
                }
            })
            .collect();
        ScheduleFile {
            algorithm: algorithm.into(),
            members,
            weight: set.weight,
            added_edges: None,
            g2_claw_free: None,
        }
    }

    pub fn mixed(cg: &ConflictGraph, m: &MixedSchedule) -> Self {
        ScheduleFile {
            g2_claw_free: Some(m.g2_claw_free),
            ..Self::new("mixed", cg, &m.schedule)
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// A network file, or a bare conflict-graph file (no network attached).
pub enum Input {
    Network(Network),
    Graph(ConflictGraph),
}

pub fn read_input(path: &Path) -> CliResult<Input> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("vertices").is_some() {
        let file: ConflictGraphFile = serde_json::from_value(value)?;
        Ok(Input::Graph(file.into_graph()?))
    } else {
        let file: NetworkFile = serde_json::from_value(value)?;
        Ok(Input::Network(file.into_network()?))
    }
}
