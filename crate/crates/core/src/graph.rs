//! Undirected graphs with exact rational edge weights, integer roundings of
//! those weights, and rooted trees.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::rational::Rational;

/// Canonical edge key: endpoints with `u < v`.
pub type EdgeKey = (u32, u32);

/// Returns the canonical `(min, max)` form of an edge.
pub fn edge_key(u: u32, v: u32) -> EdgeKey {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// An edge with its exact weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub weight: Rational,
}

/// Errors raised while building a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop { vertex: u32 },
    DuplicateEdge { u: u32, v: u32 },
    NegativeWeight { u: u32, v: u32 },
    VertexOutOfRange { vertex: u32, vertex_count: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "duplicate edge {{{u}, {v}}}"),
            GraphError::NegativeWeight { u, v } => {
                write!(f, "negative weight on edge {{{u}, {v}}}")
            }
            GraphError::VertexOutOfRange {
                vertex,
                vertex_count,
            } => write!(
                f,
                "vertex {vertex} out of range for graph with {vertex_count} vertices"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

/// Undirected simple graph with non-negative rational edge weights.
///
/// Canonical form: every edge is stored with `u < v`, sorted by `(u, v)`; no
/// self-loops, no parallel edges. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    /// adjacency[v] = list of (neighbor, edge index)
    adjacency: Vec<Vec<(u32, usize)>>,
}

impl WeightedGraph {
    /// Builds a canonical graph from an edge list. Edges may be given in any
    /// order and orientation.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut canon: Vec<Edge> = Vec::new();
        for (u, v, weight) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            for &x in &[u, v] {
                if x as usize >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if weight.is_negative() {
                let (u, v) = edge_key(u, v);
                return Err(GraphError::NegativeWeight { u, v });
            }
            let (u, v) = edge_key(u, v);
            canon.push(Edge { u, v, weight });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        for pair in canon.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicateEdge {
                    u: pair[0].u,
                    v: pair[0].v,
                });
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (idx, e) in canon.iter().enumerate() {
            adjacency[e.u as usize].push((e.v, idx));
            adjacency[e.v as usize].push((e.u, idx));
        }
        Ok(WeightedGraph {
            vertex_count,
            edges: canon,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        let (u, v) = edge_key(u, v);
        self.edges
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
    }

    pub fn weight(&self, u: u32, v: u32) -> Option<&Rational> {
        self.edge_index(u, v).map(|i| &self.edges[i].weight)
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs, ascending by the
    /// order the edges were canonicalized in.
    pub fn neighbors(&self, v: u32) -> &[(u32, usize)] {
        &self.adjacency[v as usize]
    }

    /// True if the graph is a forest (no cycles).
    pub fn is_forest(&self) -> bool {
        // union-find over the edges
        let mut parent: Vec<u32> = (0..self.vertex_count as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                return false;
            }
            parent[a as usize] = b;
        }
        true
    }

    /// True if every vertex can reach vertex 0 (or the graph is empty).
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }
}

/// Total map from edges to non-negative integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounding {
    values: BTreeMap<EdgeKey, u64>,
}

impl Rounding {
    pub fn new() -> Self {
        Rounding {
            values: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (EdgeKey, u64)>>(pairs: I) -> Self {
        Rounding {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, u: u32, v: u32, value: u64) {
        self.values.insert(edge_key(u, v), value);
    }

    pub fn get(&self, u: u32, v: u32) -> Option<u64> {
        self.values.get(&edge_key(u, v)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeKey, &u64)> {
        self.values.iter()
    }

    /// True if the rounding assigns a value to every edge of `graph` (and
    /// nothing else).
    pub fn is_total_for(&self, graph: &WeightedGraph) -> bool {
        self.values.len() == graph.edge_count()
            && graph
                .edges()
                .iter()
                .all(|e| self.values.contains_key(&(e.u, e.v)))
    }

    /// The identity rounding of a graph whose weights are all integers.
    /// Returns `None` if some weight is fractional.
    pub fn identity(graph: &WeightedGraph) -> Option<Self> {
        let mut values = BTreeMap::new();
        for e in graph.edges() {
            if !e.weight.is_integer() {
                return None;
            }
            let v: u64 = e.weight.to_integer().try_into().ok()?;
            values.insert((e.u, e.v), v);
        }
        Some(Rounding { values })
    }
}

impl Default for Rounding {
    fn default() -> Self {
        Self::new()
    }
}

/// Errors raised when interpreting a graph as a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    NotATree,
    RootOutOfRange { root: u32, vertex_count: usize },
    Empty,
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::NotATree => write!(f, "graph is not a tree (connected, n-1 edges)"),
            TreeError::RootOutOfRange { root, vertex_count } => {
                write!(f, "root {root} out of range for {vertex_count} vertices")
            }
            TreeError::Empty => write!(f, "tree must have at least one vertex"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TreeError {}

/// A tree with a designated root. Children are ordered by ascending vertex id,
/// which fixes the shape of every downstream computation.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: u32,
    parent: Vec<Option<u32>>,
    children: Vec<Vec<u32>>,
    /// weight of the edge {parent(v), v}, indexed by the child vertex v
    edge_weight: Vec<Option<Rational>>,
    /// vertices in breadth-first order from the root
    bfs_order: Vec<u32>,
}

impl RootedTree {
    /// Roots `graph` at `root`. Fails if the graph is not a tree.
    pub fn from_graph(graph: &WeightedGraph, root: u32) -> Result<Self, TreeError> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root as usize >= n {
            return Err(TreeError::RootOutOfRange {
                root,
                vertex_count: n,
            });
        }
        if graph.edge_count() != n - 1 || !graph.is_connected() {
            return Err(TreeError::NotATree);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut edge_weight = vec![None; n];
        let mut bfs_order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut queue = alloc::collections::VecDeque::new();
        queue.push_back(root);
        visited[root as usize] = true;
        while let Some(v) = queue.pop_front() {
            bfs_order.push(v);
            for &(w, idx) in graph.neighbors(v) {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    parent[w as usize] = Some(v);
                    children[v as usize].push(w);
                    edge_weight[w as usize] = Some(graph.edges()[idx].weight.clone());
                    queue.push_back(w);
                }
            }
        }
        Ok(RootedTree {
            root,
            parent,
            children,
            edge_weight,
            bfs_order,
        })
    }

    /// Builds a rooted tree directly from parent links. `parents[v]` is
    /// `Some((p, w))` for every non-root vertex.
    pub fn from_parents(
        root: u32,
        parents: &[Option<(u32, Rational)>],
    ) -> Result<Self, TreeError> {
        let n = parents.len();
        let edges = parents.iter().enumerate().filter_map(|(v, p)| {
            p.as_ref()
                .map(|(parent, w)| (*parent, v as u32, w.clone()))
        });
        let graph = WeightedGraph::from_edges(n, edges).map_err(|_| TreeError::NotATree)?;
        Self::from_graph(&graph, root)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        self.parent[v as usize]
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    /// Weight of the edge from `v` to its parent; `None` for the root.
    pub fn parent_edge_weight(&self, v: u32) -> Option<&Rational> {
        self.edge_weight[v as usize].as_ref()
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[u32] {
        &self.bfs_order
    }

    /// Vertices in some bottom-up order (children before parents).
    pub fn postorder(&self) -> Vec<u32> {
        self.bfs_order.iter().rev().copied().collect()
    }

    /// Unrounded distance from the root to every vertex.
    pub fn root_distances(&self) -> Vec<Rational> {
        let mut dist = vec![Rational::from_integer(0.into()); self.vertex_count()];
        for &v in &self.bfs_order {
            if let Some(p) = self.parent(v) {
                dist[v as usize] =
                    &dist[p as usize] + self.edge_weight[v as usize].as_ref().unwrap();
            }
        }
        dist
    }

    /// The underlying undirected graph.
    pub fn to_graph(&self) -> WeightedGraph {
        let edges = (0..self.vertex_count() as u32).filter_map(|v| {
            self.parent(v)
                .map(|p| (p, v, self.edge_weight[v as usize].clone().unwrap()))
        });
        WeightedGraph::from_edges(self.vertex_count(), edges)
            .expect("a rooted tree is always a valid graph")
    }
}
