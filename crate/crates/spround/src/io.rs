//! The edge-list text format: `#` comment lines, and data lines `u v w`
//! with non-negative integer vertex ids and a weight written as a decimal
//! (`2.5`) or a fraction (`5/2`). Serialization emits weights in lowest
//! terms. The vertex count is the largest mentioned id plus one.

use std::fmt;

use spround_core::graph::{GraphError, RootedTree, TreeError, WeightedGraph};
use spround_core::path::PathInstance;
use spround_core::rational::{format_rational, parse_rational, ParseRationalError};

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListError {
    pub line: usize,
    pub kind: EdgeListErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeListErrorKind {
    Malformed(String),
    Weight(ParseRationalError),
    Graph(GraphError),
}

impl fmt::Display for EdgeListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            EdgeListErrorKind::Malformed(msg) => write!(f, "{msg}"),
            EdgeListErrorKind::Weight(e) => write!(f, "{e}"),
            EdgeListErrorKind::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EdgeListError {}

/// Parses the edge-list format into a canonical graph.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, EdgeListError> {
    let mut edges = Vec::new();
    let mut max_vertex: Option<u32> = None;
    let mut line_of_edge = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let number = number + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(EdgeListError {
                line: number,
                kind: EdgeListErrorKind::Malformed(format!(
                    "expected 'u v w', found {} fields",
                    fields.len()
                )),
            });
        }
        let vertex = |s: &str| -> Result<u32, EdgeListError> {
            s.parse().map_err(|_| EdgeListError {
                line: number,
                kind: EdgeListErrorKind::Malformed(format!("invalid vertex id '{s}'")),
            })
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        let w = parse_rational(fields[2]).map_err(|e| EdgeListError {
            line: number,
            kind: EdgeListErrorKind::Weight(e),
        })?;
        max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, w));
        line_of_edge.push(number);
    }
    let n = max_vertex.map_or(0, |m| m as usize + 1);
    WeightedGraph::from_edges(n, edges.clone()).map_err(|e| {
        // recover the offending line for the error report
        let line = match &e {
            GraphError::SelfLoop { vertex } => edges
                .iter()
                .position(|(u, v, _)| u == v && u == vertex)
                .map(|i| line_of_edge[i]),
            GraphError::DuplicateEdge { u, v } => {
                let mut seen = std::collections::BTreeSet::new();
                let mut hit = None;
                for (i, (a, b, _)) in edges.iter().enumerate() {
                    let key = if a < b { (*a, *b) } else { (*b, *a) };
                    if key == (*u, *v) && !seen.insert(key) {
                        hit = Some(line_of_edge[i]);
                        break;
                    } else if key == (*u, *v) {
                        hit = Some(line_of_edge[i]);
                    }
                }
                hit
            }
            GraphError::NegativeWeight { u, v } => edges
                .iter()
                .position(|(a, b, w)| {
                    let key = if a < b { (*a, *b) } else { (*b, *a) };
                    key == (*u, *v) && w < &spround_core::rational::rat(0)
                })
                .map(|i| line_of_edge[i]),
            GraphError::VertexOutOfRange { .. } => None,
        };
        EdgeListError {
            line: line.unwrap_or(0),
            kind: EdgeListErrorKind::Graph(e),
        }
    })
}

/// Serializes a graph back to the edge-list format (canonical order,
/// weights in lowest terms).
pub fn serialize_graph(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, format_rational(&e.weight)));
    }
    out
}

/// Reads a graph file and requires it to be a tree, rooted at `root`.
pub fn parse_tree(text: &str, root: u32) -> Result<RootedTree, TreeFileError> {
    let graph = parse_graph(text).map_err(TreeFileError::Parse)?;
    RootedTree::from_graph(&graph, root).map_err(TreeFileError::Shape)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeFileError {
    Parse(EdgeListError),
    Shape(TreeError),
}

impl fmt::Display for TreeFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeFileError::Parse(e) => write!(f, "{e}"),
            TreeFileError::Shape(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TreeFileError {}

/// Parses a whitespace-separated list of weights as a path instance.
pub fn parse_path(text: &str) -> Result<PathInstance, String> {
    let mut weights = Vec::new();
    for token in text.split_whitespace() {
        let w = parse_rational(token).map_err(|e| format!("weight '{token}': {e}"))?;
        weights.push(w);
    }
    PathInstance::new(weights).map_err(|e| e.to_string())
}
