//! Independent reference solvers for small instances: exhaustive enumeration
//! over per-edge candidate domains, a pruned backtracking search with edge
//! pinning, and a brute-force minimum-error computation for trees.
//!
//! These establish ground truth against which the polynomial algorithms are
//! cross-validated, so they stay as direct as possible: enumeration plus the
//! graph verifier, with an integer fast path for trees.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::graph::{EdgeKey, RootedTree, Rounding, WeightedGraph};
use crate::rational::{denominator_lcm, Rational};
use crate::verify::{verify_rounding, Comparison, VerificationLevel, VerifyError};

/// Default cap on the product of candidate-domain sizes.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;
/// Default cap on backtracking search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The Cartesian product of the candidate domains is too large.
    BudgetExceeded { required: u128, budget: u64 },
    /// The backtracking search visited too many nodes.
    NodeBudgetExceeded { budget: u64 },
    /// Weights do not fit the oracle's 128-bit exact integer grid.
    ScaleOverflow,
    Verify(VerifyError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration of {required} roundings exceeds the budget of {budget}"
            ),
            OracleError::NodeBudgetExceeded { budget } => {
                write!(f, "backtracking exceeded the node budget of {budget}")
            }
            OracleError::ScaleOverflow => {
                write!(f, "weights are too large for exact 128-bit enumeration")
            }
            OracleError::Verify(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

impl From<VerifyError> for OracleError {
    fn from(e: VerifyError) -> Self {
        OracleError::Verify(e)
    }
}

/// Forcing an edge to round up (ceiling) or down (floor).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinDirection {
    Up,
    Down,
}

/// Pinned edges for the backtracking search.
pub type Pins = BTreeMap<EdgeKey, PinDirection>;

/// The admissible integers for one edge: `N0` intersected with the open
/// (strict) or closed interval of radius epsilon around the weight.
pub fn candidate_domain(
    weight: &Rational,
    epsilon: &Rational,
    comparison: Comparison,
) -> Result<Vec<u64>, OracleError> {
    let lo_bound = weight - epsilon;
    let hi_bound = weight + epsilon;
    let lo = match comparison {
        Comparison::Strict => {
            if lo_bound.is_integer() {
                lo_bound.to_integer() + 1
            } else {
                lo_bound.floor().to_integer() + 1
            }
        }
        Comparison::Closed => lo_bound.ceil().to_integer(),
    };
    let hi = match comparison {
        Comparison::Strict => {
            if hi_bound.is_integer() {
                hi_bound.to_integer() - 1
            } else {
                hi_bound.floor().to_integer()
            }
        }
        Comparison::Closed => hi_bound.floor().to_integer(),
    };
    let lo = lo.max(BigInt::zero());
    if lo > hi {
        return Ok(Vec::new());
    }
    let lo = u64::try_from(lo).map_err(|_| OracleError::ScaleOverflow)?;
    let hi = u64::try_from(hi).map_err(|_| OracleError::ScaleOverflow)?;
    Ok((lo..=hi).collect())
}

fn domains_for(
    graph: &WeightedGraph,
    epsilon: &Rational,
    comparison: Comparison,
) -> Result<Vec<Vec<u64>>, OracleError> {
    graph
        .edges()
        .iter()
        .map(|e| candidate_domain(&e.weight, epsilon, comparison))
        .collect()
}

fn domain_product(domains: &[Vec<u64>]) -> u128 {
    domains
        .iter()
        .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
}

/// Streams every total assignment from the Cartesian product of the
/// candidate domains, in lexicographic order over the canonical edge list.
pub struct RoundingEnumeration<'a> {
    graph: &'a WeightedGraph,
    domains: Vec<Vec<u64>>,
    indices: Vec<usize>,
    exhausted: bool,
}

impl<'a> Iterator for RoundingEnumeration<'a> {
    type Item = Rounding;

    fn next(&mut self) -> Option<Rounding> {
        if self.exhausted {
            return None;
        }
        let rounding = Rounding::from_pairs(
            self.graph
                .edges()
                .iter()
                .zip(self.domains.iter().zip(&self.indices))
                .map(|(e, (domain, &i))| ((e.u, e.v), domain[i])),
        );
        // odometer step, rightmost digit fastest
        let mut pos = self.domains.len();
        loop {
            if pos == 0 {
                self.exhausted = true;
                break;
            }
            pos -= 1;
            self.indices[pos] += 1;
            if self.indices[pos] < self.domains[pos].len() {
                break;
            }
            self.indices[pos] = 0;
        }
        Some(rounding)
    }
}

/// Enumerates every rounding within the per-edge candidate domains.
/// Refuses instances whose domain product exceeds `budget`.
pub fn enumerate_roundings<'a>(
    graph: &'a WeightedGraph,
    epsilon: &Rational,
    comparison: Comparison,
    budget: u64,
) -> Result<RoundingEnumeration<'a>, OracleError> {
    let domains = domains_for(graph, epsilon, comparison)?;
    let required = domain_product(&domains);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded {
            required,
            budget,
        });
    }
    let exhausted = domains.iter().any(Vec::is_empty);
    Ok(RoundingEnumeration {
        graph,
        indices: vec![0; domains.len()],
        domains,
        exhausted,
    })
}

/// Exhaustively decides whether an epsilon-rounding exists, returning the
/// first one found (in enumeration order).
pub fn brute_force_decide(
    graph: &WeightedGraph,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
    budget: u64,
) -> Result<Option<Rounding>, OracleError> {
    if infeasible_epsilon(epsilon, comparison) {
        return Ok(None);
    }
    let domains = domains_for(graph, epsilon, comparison)?;
    let required = domain_product(&domains);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    // on a tree the three levels coincide, so the integer fast path applies
    if let Some(tree) = tree_view(graph) {
        if let Some(result) = tree_search(&tree, graph, epsilon, comparison, TreeMode::First)? {
            return Ok(match result {
                TreeOutcome::Witness(r) => Some(r),
                _ => None,
            });
        }
    }
    for rounding in enumerate_roundings(graph, epsilon, comparison, budget)? {
        if verify_rounding(graph, &rounding, epsilon, level, comparison)?.passed {
            return Ok(Some(rounding));
        }
    }
    Ok(None)
}

/// All roundings that pass verification, in enumeration order.
pub fn valid_roundings(
    graph: &WeightedGraph,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
    budget: u64,
) -> Result<Vec<Rounding>, OracleError> {
    if infeasible_epsilon(epsilon, comparison) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for rounding in enumerate_roundings(graph, epsilon, comparison, budget)? {
        if verify_rounding(graph, &rounding, epsilon, level, comparison)?.passed {
            out.push(rounding);
        }
    }
    Ok(out)
}

fn infeasible_epsilon(epsilon: &Rational, comparison: Comparison) -> bool {
    match comparison {
        // the trivial one-vertex path always has error 0
        Comparison::Strict => !epsilon.is_positive(),
        Comparison::Closed => epsilon.is_negative(),
    }
}

// ---------------------------------------------------------------------------
// exact integer fast path for trees
// ---------------------------------------------------------------------------

/// A tree-shaped instance scaled onto a 128-bit integer grid.
struct ScaledTree {
    /// per edge: candidate rounded values and their scaled signed errors
    candidates: Vec<Vec<(u64, i128)>>,
    /// prefix error slot per vertex, filled during enumeration
    lca: Vec<Vec<u32>>,
    bfs_children: Vec<(u32, usize)>, // (child vertex, edge index), bfs order
    parent_of: Vec<Option<u32>>,
    eps_scaled: i128,
}

fn tree_view(graph: &WeightedGraph) -> Option<RootedTree> {
    if graph.vertex_count() == 0 {
        return None;
    }
    RootedTree::from_graph(graph, 0).ok()
}

fn scale_tree(
    tree: &RootedTree,
    graph: &WeightedGraph,
    epsilon: &Rational,
    comparison: Comparison,
) -> Result<Option<ScaledTree>, OracleError> {
    let mut lcm = denominator_lcm(graph.edges().iter().map(|e| &e.weight));
    lcm = num_integer::lcm(lcm, epsilon.denom().clone());
    let Some(scale) = lcm.to_i128() else {
        return Ok(None);
    };
    let scaled_weight = |r: &Rational| -> Option<i128> {
        let v = r.numer() * (&lcm / r.denom());
        v.to_i128()
    };
    let Some(eps_scaled) = scaled_weight(epsilon) else {
        return Ok(None);
    };
    let mut candidates = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let Some(w) = scaled_weight(&e.weight) else {
            return Ok(None);
        };
        let domain = candidate_domain(&e.weight, epsilon, comparison)?;
        let mut list = Vec::with_capacity(domain.len());
        for value in domain {
            let rounded = (value as i128).checked_mul(scale);
            let Some(rounded) = rounded else {
                return Ok(None);
            };
            list.push((value, rounded - w));
        }
        candidates.push(list);
    }

    // depth + lca table
    let n = tree.vertex_count();
    let mut depth = vec![0u32; n];
    for &v in tree.bfs_order() {
        if let Some(p) = tree.parent(v) {
            depth[v as usize] = depth[p as usize] + 1;
        }
    }
    let lca_of = |mut a: u32, mut b: u32| -> u32 {
        while depth[a as usize] > depth[b as usize] {
            a = tree.parent(a).unwrap();
        }
        while depth[b as usize] > depth[a as usize] {
            b = tree.parent(b).unwrap();
        }
        while a != b {
            a = tree.parent(a).unwrap();
            b = tree.parent(b).unwrap();
        }
        a
    };
    let mut lca = vec![vec![0u32; n]; n];
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            lca[u as usize][v as usize] = lca_of(u, v);
        }
    }
    let bfs_children = tree
        .bfs_order()
        .iter()
        .filter_map(|&v| {
            tree.parent(v)
                .map(|p| (v, graph.edge_index(p, v).unwrap()))
        })
        .collect();
    Ok(Some(ScaledTree {
        candidates,
        lca,
        bfs_children,
        parent_of: (0..n as u32).map(|v| tree.parent(v)).collect(),
        eps_scaled,
    }))
}

#[derive(Clone, Copy)]
enum TreeMode {
    First,
    MinMaxError,
}

enum TreeOutcome {
    Witness(Rounding),
    MinError(i128),
    None,
}

/// Exhaustive search over a scaled tree. Returns `Ok(None)` when the
/// instance does not fit the integer grid (caller falls back to the general
/// path).
fn tree_search(
    tree: &RootedTree,
    graph: &WeightedGraph,
    epsilon: &Rational,
    comparison: Comparison,
    mode: TreeMode,
) -> Result<Option<TreeOutcome>, OracleError> {
    let Some(scaled) = scale_tree(tree, graph, epsilon, comparison)? else {
        return Ok(None);
    };
    let n = tree.vertex_count();
    let m = graph.edge_count();
    if scaled.candidates.iter().any(Vec::is_empty) {
        return Ok(Some(match mode {
            TreeMode::First => TreeOutcome::None,
            TreeMode::MinMaxError => TreeOutcome::None,
        }));
    }
    let strict = matches!(comparison, Comparison::Strict);
    let mut indices = vec![0usize; m];
    let mut prefix = vec![0i128; n];
    let mut best: Option<i128> = None;
    loop {
        // prefix errors in bfs order, then the pairwise maximum
        let mut max_abs: i128 = 0;
        for &(child, edge_idx) in &scaled.bfs_children {
            let err = scaled.candidates[edge_idx][indices[edge_idx]].1;
            let p = scaled.parent_of[child as usize].unwrap();
            prefix[child as usize] = prefix[p as usize] + err;
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let l = scaled.lca[u][v] as usize;
                let err = prefix[u] + prefix[v] - 2 * prefix[l];
                max_abs = max_abs.max(err.abs());
            }
        }
        let ok = if strict {
            max_abs < scaled.eps_scaled
        } else {
            max_abs <= scaled.eps_scaled
        };
        match mode {
            TreeMode::First => {
                if ok {
                    return Ok(Some(TreeOutcome::Witness(rounding_from_indices(
                        graph, &scaled, &indices,
                    ))));
                }
            }
            TreeMode::MinMaxError => {
                if best.map_or(true, |b| max_abs < b) {
                    best = Some(max_abs);
                }
            }
        }
        // odometer
        let mut pos = m;
        loop {
            if pos == 0 {
                let outcome = match (mode, best) {
                    (TreeMode::First, _) => TreeOutcome::None,
                    (TreeMode::MinMaxError, Some(b)) => TreeOutcome::MinError(b),
                    (TreeMode::MinMaxError, None) => TreeOutcome::None,
                };
                return Ok(Some(outcome));
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < scaled.candidates[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

fn rounding_from_indices(
    graph: &WeightedGraph,
    scaled: &ScaledTree,
    indices: &[usize],
) -> Rounding {
    Rounding::from_pairs(
        graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.u, e.v), scaled.candidates[i][indices[i]].0)),
    )
}

/// The minimum, over all enumerable roundings, of the maximum absolute path
/// error on the tree. Exact rational result.
pub fn brute_force_min_epsilon(
    graph: &WeightedGraph,
    budget: u64,
) -> Result<Rational, OracleError> {
    let tree = tree_view(graph).expect("instance must be a tree");
    // every rounding with an edge error of 2 or more is dominated, so the
    // domains at threshold 2 cover the optimum
    let two = crate::rational::rat(2);
    let domains = domains_for(graph, &two, Comparison::Strict)?;
    let required = domain_product(&domains);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded {
            required,
            budget,
        });
    }
    match tree_search(&tree, graph, &two, Comparison::Strict, TreeMode::MinMaxError)? {
        Some(TreeOutcome::MinError(best)) => {
            let lcm = denominator_lcm(graph.edges().iter().map(|e| &e.weight));
            Ok(Rational::new(BigInt::from(best), lcm))
        }
        Some(_) => unreachable!("domains at threshold 2 are never empty"),
        // trees that do not fit the integer grid are outside oracle scope
        None => Err(OracleError::ScaleOverflow),
    }
}

/// Locally optimal root error ranges of a tree by exhaustive enumeration:
/// collect the root error range of every valid rounding, then drop any range
/// that strictly contains another realized range.
pub fn brute_force_error_range_set(
    tree: &RootedTree,
    epsilon: &Rational,
    comparison: Comparison,
    budget: u64,
) -> Result<Vec<(Rational, Rational)>, OracleError> {
    let graph = tree.to_graph();
    if infeasible_epsilon(epsilon, comparison) {
        return Ok(Vec::new());
    }
    let mut realized: Vec<(Rational, Rational)> = Vec::new();
    for rounding in enumerate_roundings(&graph, epsilon, comparison, budget)? {
        let report = verify_rounding(
            &graph,
            &rounding,
            epsilon,
            VerificationLevel::PathOblivious,
            comparison,
        )?;
        if !report.passed {
            continue;
        }
        // signed root-to-vertex errors
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        let mut prefix = vec![Rational::zero(); tree.vertex_count()];
        for &v in tree.bfs_order() {
            if let Some(p) = tree.parent(v) {
                let w = tree.parent_edge_weight(v).unwrap();
                let rounded = rounding.get(p, v).unwrap();
                prefix[v as usize] =
                    &prefix[p as usize] + Rational::from_integer(rounded.into()) - w;
                if prefix[v as usize] < lo {
                    lo = prefix[v as usize].clone();
                }
                if prefix[v as usize] > hi {
                    hi = prefix[v as usize].clone();
                }
            }
        }
        realized.push((lo, hi));
    }
    realized.sort();
    realized.dedup();
    let locally_optimal: Vec<(Rational, Rational)> = realized
        .iter()
        .filter(|(lo, hi)| {
            !realized
                .iter()
                .any(|(lo2, hi2)| (lo2, hi2) != (lo, hi) && lo <= lo2 && hi2 <= hi)
        })
        .cloned()
        .collect();
    Ok(locally_optimal)
}

// ---------------------------------------------------------------------------
// backtracking with pruning and pinned edges
// ---------------------------------------------------------------------------

/// Depth-first search over the candidate domains in a fixed edge order,
/// pruning as soon as every shortest path between some vertex pair is fully
/// assigned and the pair violates the error bound. Complete: returns `None`
/// only if no rounding satisfies the pins.
pub fn backtracking_solve(
    graph: &WeightedGraph,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
    pins: &Pins,
    node_budget: u64,
) -> Result<Option<Rounding>, OracleError> {
    let mut solutions = search(graph, epsilon, level, comparison, pins, node_budget, true)?;
    Ok(solutions.pop())
}

/// Every rounding consistent with the pins that passes verification, in the
/// fixed search order.
pub fn backtracking_solutions(
    graph: &WeightedGraph,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
    pins: &Pins,
    node_budget: u64,
) -> Result<Vec<Rounding>, OracleError> {
    search(graph, epsilon, level, comparison, pins, node_budget, false)
}

struct PairCheck {
    u: u32,
    v: u32,
    /// edge indices lying on at least one shortest u-v path
    edges: Vec<usize>,
}

fn search(
    graph: &WeightedGraph,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
    pins: &Pins,
    node_budget: u64,
    first_only: bool,
) -> Result<Vec<Rounding>, OracleError> {
    if infeasible_epsilon(epsilon, comparison) {
        return Ok(Vec::new());
    }
    let m = graph.edge_count();
    let mut domains = domains_for(graph, epsilon, comparison)?;
    for (key, direction) in pins {
        let Some(idx) = graph.edge_index(key.0, key.1) else {
            continue;
        };
        let w = &graph.edges()[idx].weight;
        let target = match direction {
            PinDirection::Down => w.floor().to_integer(),
            PinDirection::Up => w.ceil().to_integer(),
        };
        let target = u64::try_from(target).map_err(|_| OracleError::ScaleOverflow)?;
        domains[idx].retain(|&v| v == target);
    }
    if domains.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }

    let lcm = {
        let mut l = denominator_lcm(graph.edges().iter().map(|e| &e.weight));
        l = num_integer::lcm(l, epsilon.denom().clone());
        l
    };
    let scale = lcm.to_i128().ok_or(OracleError::ScaleOverflow)?;
    let weights: Vec<i128> = graph
        .edges()
        .iter()
        .map(|e| {
            (e.weight.numer() * (&lcm / e.weight.denom()))
                .to_i128()
                .ok_or(OracleError::ScaleOverflow)
        })
        .collect::<Result<_, _>>()?;
    let eps_scaled = (epsilon.numer() * (&lcm / epsilon.denom()))
        .to_i128()
        .ok_or(OracleError::ScaleOverflow)?;
    let n = graph.vertex_count();

    // all-pairs scaled distances
    let dist: Vec<Vec<Option<i128>>> = (0..n as u32)
        .map(|s| dijkstra_i128(graph, &weights, s))
        .collect();

    // per-pair shortest-path edge sets, and a usage count per edge
    let mut pair_checks: Vec<PairCheck> = Vec::new();
    let mut usage = vec![0u64; m];
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            let Some(duv) = dist[u as usize][v as usize] else {
                continue;
            };
            let mut edges = Vec::new();
            for (idx, e) in graph.edges().iter().enumerate() {
                let (a, b) = (e.u as usize, e.v as usize);
                let on_path = [(a, b), (b, a)].iter().any(|&(x, y)| {
                    match (dist[u as usize][x], dist[y as usize][v as usize]) {
                        (Some(dx), Some(dy)) => dx + weights[idx] + dy == duv,
                        _ => false,
                    }
                });
                if on_path {
                    edges.push(idx);
                    usage[idx] += 1;
                }
            }
            pair_checks.push(PairCheck { u, v, edges });
        }
    }

    // assign the most-used edges first
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (core::cmp::Reverse(usage[i]), i));
    let mut position = vec![0usize; m]; // edge index -> order position
    for (pos, &idx) in order.iter().enumerate() {
        position[idx] = pos;
    }
    // pairs become checkable at the latest position among their edges
    let mut due_at: Vec<Vec<usize>> = vec![Vec::new(); m.max(1)];
    for (pc_idx, pc) in pair_checks.iter().enumerate() {
        if let Some(&last) = pc.edges.iter().max_by_key(|&&e| position[e]) {
            due_at[position[last]].push(pc_idx);
        }
    }

    let positive = weights.iter().all(|w| *w > 0);
    let strict = matches!(comparison, Comparison::Strict);
    let mut assigned: Vec<Option<i128>> = vec![None; m]; // scaled rounded weight
    let mut values: Vec<u64> = vec![0; m];
    let mut out = Vec::new();
    let mut nodes = 0u64;

    // iterative DFS with explicit choice stack
    let mut choice = vec![0usize; m + 1];
    let mut depth = 0usize;
    'dfs: loop {
        if depth == m {
            // complete assignment; pairwise condition 1 already holds when
            // weights are positive (every pair was checked on completion)
            let rounding = Rounding::from_pairs(
                graph
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| ((e.u, e.v), values[i])),
            );
            let accept = if positive && level == VerificationLevel::PathOblivious {
                true
            } else {
                verify_rounding(graph, &rounding, epsilon, level, comparison)?.passed
            };
            if accept {
                out.push(rounding);
                if first_only {
                    return Ok(out);
                }
            }
            // backtrack
            loop {
                if depth == 0 {
                    break 'dfs;
                }
                depth -= 1;
                assigned[order[depth]] = None;
                choice[depth] += 1;
                if choice[depth] < domains[order[depth]].len() {
                    break;
                }
            }
            continue;
        }
        let edge = order[depth];
        if choice[depth] >= domains[edge].len() {
            // exhausted this level
            if depth == 0 {
                break;
            }
            depth -= 1;
            assigned[order[depth]] = None;
            choice[depth] += 1;
            continue;
        }
        nodes += 1;
        if nodes > node_budget {
            return Err(OracleError::NodeBudgetExceeded {
                budget: node_budget,
            });
        }
        let value = domains[edge][choice[depth]];
        values[edge] = value;
        assigned[edge] = Some((value as i128) * scale);

        // check pairs completed by this assignment
        let mut violated = false;
        if positive {
            for &pc_idx in &due_at[depth] {
                let pc = &pair_checks[pc_idx];
                let (lo, hi) = pair_extrema(graph, &weights, &assigned, &dist, pc);
                let duv = dist[pc.u as usize][pc.v as usize].unwrap();
                let (elo, ehi) = (lo - duv, hi - duv);
                let bad = if strict {
                    elo <= -eps_scaled || ehi >= eps_scaled
                } else {
                    elo < -eps_scaled || ehi > eps_scaled
                };
                if bad {
                    violated = true;
                    break;
                }
            }
        }
        if violated {
            choice[depth] += 1;
        } else {
            depth += 1;
            choice[depth] = 0;
        }
    }
    Ok(out)
}

fn dijkstra_i128(graph: &WeightedGraph, weights: &[i128], source: u32) -> Vec<Option<i128>> {
    use alloc::collections::BinaryHeap;
    use core::cmp::Reverse;
    let n = graph.vertex_count();
    let mut dist: Vec<Option<i128>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = Some(0);
    heap.push(Reverse((0i128, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v as usize] != Some(d) {
            continue;
        }
        for &(w, idx) in graph.neighbors(v) {
            let cand = d + weights[idx];
            if dist[w as usize].map_or(true, |cur| cand < cur) {
                dist[w as usize] = Some(cand);
                heap.push(Reverse((cand, w)));
            }
        }
    }
    dist
}

/// Min and max rounded weight over all shortest u-v paths, assuming every
/// edge on those paths is assigned and all weights are positive (so the
/// tight arcs form a DAG ordered by distance from u).
fn pair_extrema(
    graph: &WeightedGraph,
    weights: &[i128],
    assigned: &[Option<i128>],
    dist: &[Vec<Option<i128>>],
    pc: &PairCheck,
) -> (i128, i128) {
    let du = &dist[pc.u as usize];
    // vertices on shortest u-v paths, in ascending distance from u
    let duv = du[pc.v as usize].unwrap();
    let dv = &dist[pc.v as usize];
    let mut vertices: Vec<u32> = (0..graph.vertex_count() as u32)
        .filter(|&x| match (du[x as usize], dv[x as usize]) {
            (Some(a), Some(b)) => a + b == duv,
            _ => false,
        })
        .collect();
    vertices.sort_by_key(|&x| du[x as usize].unwrap());
    let mut lo: BTreeMap<u32, i128> = BTreeMap::new();
    let mut hi: BTreeMap<u32, i128> = BTreeMap::new();
    lo.insert(pc.u, 0);
    hi.insert(pc.u, 0);
    for &x in &vertices {
        if x == pc.u {
            continue;
        }
        let dx = du[x as usize].unwrap();
        let mut best_lo: Option<i128> = None;
        let mut best_hi: Option<i128> = None;
        for &(y, idx) in graph.neighbors(x) {
            match du[y as usize] {
                Some(dy) if dy + weights[idx] == dx => {}
                _ => continue,
            }
            let (Some(&plo), Some(&phi)) = (lo.get(&y), hi.get(&y)) else {
                continue;
            };
            let value = assigned[idx].expect("edges on completed pairs are assigned");
            best_lo = Some(best_lo.map_or(plo + value, |b: i128| b.min(plo + value)));
            best_hi = Some(best_hi.map_or(phi + value, |b: i128| b.max(phi + value)));
        }
        if let (Some(a), Some(b)) = (best_lo, best_hi) {
            lo.insert(x, a);
            hi.insert(x, b);
        }
    }
    (lo[&pc.v], hi[&pc.v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_key;
    use crate::rational::{rat, ratio};

    fn star_half() -> WeightedGraph {
        WeightedGraph::from_edges(
            4,
            vec![
                (0, 1, ratio(1, 2)),
                (0, 2, ratio(1, 2)),
                (0, 3, ratio(1, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn domains_match_the_examples() {
        // single edge 1/2 at strict 1: {0, 1}
        assert_eq!(
            candidate_domain(&ratio(1, 2), &rat(1), Comparison::Strict).unwrap(),
            vec![0, 1]
        );
        // integer edge: the open interval at 1 pins it, the closed one
        // allows both neighbors
        assert_eq!(
            candidate_domain(&rat(5), &rat(1), Comparison::Strict).unwrap(),
            vec![5]
        );
        assert_eq!(
            candidate_domain(&rat(5), &rat(1), Comparison::Closed).unwrap(),
            vec![4, 5, 6]
        );
        // edge 1/2 at strict 1/2: empty
        assert!(candidate_domain(&ratio(1, 2), &ratio(1, 2), Comparison::Strict)
            .unwrap()
            .is_empty());
        // closed mode includes the endpoints
        assert_eq!(
            candidate_domain(&ratio(1, 2), &ratio(1, 2), Comparison::Closed).unwrap(),
            vec![0, 1]
        );
        // non-negativity clamp
        assert_eq!(
            candidate_domain(&ratio(1, 2), &rat(2), Comparison::Strict).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn enumeration_is_lexicographic_and_budgeted() {
        let g = WeightedGraph::from_edges(2, vec![(0, 1, ratio(1, 2))]).unwrap();
        let all: Vec<_> = enumerate_roundings(&g, &rat(1), Comparison::Strict, 16)
            .unwrap()
            .map(|r| r.get(0, 1).unwrap())
            .collect();
        assert_eq!(all, vec![0, 1]);
        assert!(matches!(
            enumerate_roundings(&star_half(), &rat(1), Comparison::Strict, 4),
            Err(OracleError::BudgetExceeded { required: 8, .. })
        ));
    }

    #[test]
    fn star_has_no_strict_one_rounding() {
        let witness = brute_force_decide(
            &star_half(),
            &rat(1),
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            1 << 10,
        )
        .unwrap();
        assert_eq!(witness, None);
        let closed = brute_force_decide(
            &star_half(),
            &rat(1),
            VerificationLevel::PathOblivious,
            Comparison::Closed,
            1 << 10,
        )
        .unwrap();
        assert!(closed.is_some());
    }

    #[test]
    fn identity_is_found_for_integer_graphs() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, rat(2)), (1, 2, rat(3))]).unwrap();
        let witness = brute_force_decide(
            &g,
            &ratio(1, 2),
            VerificationLevel::Strong,
            Comparison::Strict,
            1 << 10,
        )
        .unwrap()
        .unwrap();
        assert_eq!(witness.get(0, 1), Some(2));
        assert_eq!(witness.get(1, 2), Some(3));
    }

    #[test]
    fn min_epsilon_examples() {
        let single = WeightedGraph::from_edges(2, vec![(0, 1, ratio(1, 2))]).unwrap();
        assert_eq!(
            brute_force_min_epsilon(&single, 1 << 16).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(brute_force_min_epsilon(&star_half(), 1 << 16).unwrap(), rat(1));
        let int_tree =
            WeightedGraph::from_edges(3, vec![(0, 1, rat(4)), (1, 2, rat(9))]).unwrap();
        assert_eq!(brute_force_min_epsilon(&int_tree, 1 << 16).unwrap(), rat(0));
    }

    #[test]
    fn backtracking_agrees_with_enumeration() {
        let g = star_half();
        let eps = ratio(3, 2);
        let by_enum = valid_roundings(
            &g,
            &eps,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            1 << 16,
        )
        .unwrap();
        let mut by_search = backtracking_solutions(
            &g,
            &eps,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            &Pins::new(),
            1 << 16,
        )
        .unwrap();
        by_search.sort_by_key(|r| (r.get(0, 1), r.get(0, 2), r.get(0, 3)));
        let mut by_enum = by_enum;
        by_enum.sort_by_key(|r| (r.get(0, 1), r.get(0, 2), r.get(0, 3)));
        assert_eq!(by_enum, by_search);
        assert!(!by_enum.is_empty());
    }

    #[test]
    fn pins_restrict_the_search() {
        let g = star_half();
        let eps = ratio(3, 2);
        let mut pins = Pins::new();
        pins.insert(edge_key(0, 1), PinDirection::Up);
        let solutions = backtracking_solutions(
            &g,
            &eps,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            &pins,
            1 << 16,
        )
        .unwrap();
        assert!(!solutions.is_empty());
        assert!(solutions.iter().all(|r| r.get(0, 1) == Some(1)));
        let unpinned = backtracking_solutions(
            &g,
            &eps,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            &Pins::new(),
            1 << 16,
        )
        .unwrap();
        let matching = unpinned
            .iter()
            .filter(|r| r.get(0, 1) == Some(1))
            .count();
        assert_eq!(matching, solutions.len());
    }

    #[test]
    fn empty_graph_has_the_empty_rounding() {
        let g = WeightedGraph::from_edges(0, Vec::new()).unwrap();
        let witness = backtracking_solve(
            &g,
            &rat(1),
            VerificationLevel::Strong,
            Comparison::Strict,
            &Pins::new(),
            16,
        )
        .unwrap()
        .unwrap();
        assert!(witness.is_empty());
    }

    #[test]
    fn range_set_by_enumeration_matches_hand_trace() {
        let g = WeightedGraph::from_edges(
            3,
            vec![(0, 1, ratio(1, 2)), (1, 2, ratio(1, 2))],
        )
        .unwrap();
        let t = RootedTree::from_graph(&g, 1).unwrap();
        let set =
            brute_force_error_range_set(&t, &rat(1), Comparison::Strict, 1 << 10).unwrap();
        assert_eq!(set, vec![(ratio(-1, 2), ratio(1, 2))]);
    }
}
