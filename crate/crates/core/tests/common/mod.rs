//! Shared instance generators and an independent path-enumeration oracle.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spround_core::graph::{RootedTree, Rounding, WeightedGraph};
use spround_core::rational::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Uniform random attachment tree on `n` vertices; weight numerators are
/// drawn from `1..=max_int * den` with denominators from `1..=max_den`.
pub fn random_tree_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_den: i64,
    max_int: i64,
) -> WeightedGraph {
    let edges = (1..n as u32).map(|v| {
        let parent = rng.gen_range(0..v);
        let den = rng.gen_range(1..=max_den);
        let num = rng.gen_range(0..=max_int * den);
        (parent, v, rational(num, den))
    });
    WeightedGraph::from_edges(n, edges.collect::<Vec<_>>()).unwrap()
}

/// Random tree with quarter-integer weights, the grid used for oracle
/// cross-validation.
pub fn random_quarter_tree(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let edges = (1..n as u32).map(|v| {
        let parent = rng.gen_range(0..v);
        let num = rng.gen_range(0..=12);
        (parent, v, rational(num, 4))
    });
    WeightedGraph::from_edges(n, edges.collect::<Vec<_>>()).unwrap()
}

/// Random connected graph: a random tree plus extra random edges.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_edges: usize,
    max_den: i64,
    max_int: i64,
) -> WeightedGraph {
    let mut edges: Vec<(u32, u32, Rational)> = (1..n as u32)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            let den = rng.gen_range(1..=max_den);
            let num = rng.gen_range(1..=max_int * den);
            (parent, v, rational(num, den))
        })
        .collect();
    let mut attempts = 0;
    let mut added = 0;
    while added < extra_edges && attempts < extra_edges * 10 && n >= 2 {
        attempts += 1;
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if edges.iter().any(|e| (e.0, e.1) == (a, b)) {
            continue;
        }
        let den = rng.gen_range(1..=max_den);
        let num = rng.gen_range(1..=max_int * den);
        edges.push((a, b, rational(num, den)));
        added += 1;
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// A random rounding within distance 2 of each weight.
pub fn random_nearby_rounding(rng: &mut ChaCha8Rng, graph: &WeightedGraph) -> Rounding {
    Rounding::from_pairs(graph.edges().iter().map(|e| {
        let base = e.weight.floor().to_integer();
        let base = i64::try_from(base).unwrap();
        let value = (base + rng.gen_range(-1..=2)).max(0) as u64;
        ((e.u, e.v), value)
    }))
}

pub fn rooted(graph: &WeightedGraph, root: u32) -> RootedTree {
    RootedTree::from_graph(graph, root).unwrap()
}

/// All simple paths between `u` and `v` by backtracking DFS; the independent
/// reference for shortest-path aggregation.
fn all_simple_paths(graph: &WeightedGraph, u: u32, v: u32) -> Vec<Vec<usize>> {
    let mut paths = Vec::new();
    let mut visited = vec![false; graph.vertex_count()];
    let mut edge_stack = Vec::new();
    fn dfs(
        graph: &WeightedGraph,
        at: u32,
        target: u32,
        visited: &mut Vec<bool>,
        edge_stack: &mut Vec<usize>,
        paths: &mut Vec<Vec<usize>>,
    ) {
        if at == target {
            paths.push(edge_stack.clone());
            return;
        }
        visited[at as usize] = true;
        for &(w, idx) in graph.neighbors(at) {
            if !visited[w as usize] {
                edge_stack.push(idx);
                dfs(graph, w, target, visited, edge_stack, paths);
                edge_stack.pop();
            }
        }
        visited[at as usize] = false;
    }
    dfs(graph, u, v, &mut visited, &mut edge_stack, &mut paths);
    paths
}

/// Exact (min, max) of the rounded weight over all original-shortest simple
/// paths from `u` to `v`, by explicit enumeration. `None` if unreachable.
pub fn enumerated_error_extrema(
    graph: &WeightedGraph,
    rounding: &Rounding,
    u: u32,
    v: u32,
) -> Option<(Rational, Rational)> {
    let paths = all_simple_paths(graph, u, v);
    if paths.is_empty() && u != v {
        return None;
    }
    let weight_of = |path: &[usize]| -> Rational {
        path.iter()
            .map(|&i| graph.edges()[i].weight.clone())
            .sum()
    };
    let rounded_of = |path: &[usize]| -> Rational {
        path.iter()
            .map(|&i| {
                let e = &graph.edges()[i];
                Rational::from_integer(rounding.get(e.u, e.v).unwrap().into())
            })
            .sum()
    };
    let mut best: Option<Rational> = None;
    for p in &paths {
        let w = weight_of(p);
        if best.as_ref().map_or(true, |b| w < *b) {
            best = Some(w);
        }
    }
    let d = best.unwrap_or_else(|| Rational::from_integer(0.into()));
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for p in &paths {
        if weight_of(p) != d {
            continue;
        }
        let err = rounded_of(p) - &d;
        if lo.as_ref().map_or(true, |b| err < *b) {
            lo = Some(err.clone());
        }
        if hi.as_ref().map_or(true, |b| err > *b) {
            hi = Some(err);
        }
    }
    if u == v {
        let zero = Rational::from_integer(0.into());
        return Some((zero.clone(), zero));
    }
    Some((lo.unwrap(), hi.unwrap()))
}
