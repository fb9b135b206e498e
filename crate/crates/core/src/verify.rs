//! Verification of integer roundings against the three escalating levels:
//! path-oblivious (error bound only), weak (original shortest paths stay
//! shortest), and strong (new shortest paths were already shortest).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::graph::{Rounding, WeightedGraph};
use crate::rational::{denominator_lcm, Rational};
use crate::shortest::{
    dijkstra, scaled_original, scaled_rounded, tight_path_stats, ShortestPathError,
    DEFAULT_CLUSTER_BUDGET,
};

/// Which of the three conditions of a rounding is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VerificationLevel {
    /// Condition 1 only: every shortest path's weight changes by less than
    /// epsilon.
    PathOblivious,
    /// Conditions 1-2: additionally, every original shortest path remains a
    /// shortest path after rounding.
    Weak,
    /// Conditions 1-3: additionally, every shortest path after rounding was
    /// already a shortest path before.
    Strong,
}

impl fmt::Display for VerificationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationLevel::PathOblivious => write!(f, "path-oblivious"),
            VerificationLevel::Weak => write!(f, "weak"),
            VerificationLevel::Strong => write!(f, "strong"),
        }
    }
}

/// Whether the error bound is an open interval `(-eps, eps)` or a closed one.
/// The closed variant realizes the infimum in minimum-epsilon optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Strict,
    Closed,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Strict => write!(f, "strict"),
            Comparison::Closed => write!(f, "closed"),
        }
    }
}

/// A vertex pair witnessing a violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub u: u32,
    pub v: u32,
    pub description: String,
}

/// Result of checking one rounding at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub level: VerificationLevel,
    pub comparison: Comparison,
    pub epsilon: Rational,
    pub passed: bool,
    /// Signed rounding error of largest magnitude over all checked shortest
    /// paths (0 when there are no pairs).
    pub worst_error: Rational,
    pub witness: Option<Witness>,
}

/// Errors raised by the verifier itself (as opposed to a failed check).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// epsilon must be > 0 (strict) or >= 0 (closed)
    EpsilonOutOfRange,
    RoundingNotTotal,
    ShortestPath(ShortestPathError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::EpsilonOutOfRange => {
                write!(f, "epsilon must be positive (or zero in closed mode)")
            }
            VerifyError::RoundingNotTotal => {
                write!(f, "rounding does not cover every edge of the graph")
            }
            VerifyError::ShortestPath(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for VerifyError {}

impl From<ShortestPathError> for VerifyError {
    fn from(e: ShortestPathError) -> Self {
        match e {
            ShortestPathError::RoundingNotTotal => VerifyError::RoundingNotTotal,
            other => VerifyError::ShortestPath(other),
        }
    }
}

/// Tracks the signed error of largest magnitude together with its pair.
struct WorstError {
    value: Rational,
    pair: Option<(u32, u32)>,
}

impl WorstError {
    fn new() -> Self {
        WorstError {
            value: Rational::zero(),
            pair: None,
        }
    }

    fn update(&mut self, err: Rational, u: u32, v: u32) {
        if err.abs() > self.value.abs() {
            self.value = err;
            self.pair = Some((u, v));
        }
    }
}

fn bound_ok(err: &Rational, epsilon: &Rational, comparison: Comparison) -> bool {
    match comparison {
        Comparison::Strict => err.abs() < *epsilon,
        Comparison::Closed => err.abs() <= *epsilon,
    }
}

/// Checks whether `rounding` is an epsilon-rounding of `graph` at the given
/// level. Pairs in different connected components are skipped.
pub fn verify_rounding(
    graph: &WeightedGraph,
    rounding: &Rounding,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
) -> Result<VerificationReport, VerifyError> {
    match comparison {
        Comparison::Strict if !epsilon.is_positive() => {
            return Err(VerifyError::EpsilonOutOfRange)
        }
        Comparison::Closed if epsilon.is_negative() => {
            return Err(VerifyError::EpsilonOutOfRange)
        }
        _ => {}
    }
    if !rounding.is_total_for(graph) {
        return Err(VerifyError::RoundingNotTotal);
    }
    if graph.is_forest() {
        return Ok(verify_forest(graph, rounding, epsilon, level, comparison));
    }
    verify_general(graph, rounding, epsilon, level, comparison)
}

/// On a forest the simple path between two vertices is unique, so it is the
/// shortest path under any weights: conditions 2 and 3 hold automatically and
/// only the error bound needs checking. Runs in linear time per component.
fn verify_forest(
    graph: &WeightedGraph,
    rounding: &Rounding,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
) -> VerificationReport {
    let n = graph.vertex_count();
    // signed error of each edge
    let edge_err: Vec<Rational> = graph
        .edges()
        .iter()
        .map(|e| {
            let rounded = rounding.get(e.u, e.v).expect("rounding is total");
            Rational::from_integer(BigInt::from(rounded)) - &e.weight
        })
        .collect();

    // max_val/min_val: extreme signed path error with a witnessing pair
    let mut max_val: (Rational, u32, u32) = (Rational::zero(), 0, 0);
    let mut min_val: (Rational, u32, u32) = (Rational::zero(), 0, 0);

    let mut seen = vec![false; n];
    for root in 0..n as u32 {
        if seen[root as usize] {
            continue;
        }
        // iterative post-order over the component
        let mut order = Vec::new();
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
        let mut stack = vec![root];
        seen[root as usize] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, idx) in graph.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = Some((v, idx));
                    stack.push(w);
                }
            }
        }
        // downward error extremes of each subtree, with witness vertices
        let mut down_max: Vec<(Rational, u32)> =
            (0..n as u32).map(|v| (Rational::zero(), v)).collect();
        let mut down_min: Vec<(Rational, u32)> =
            (0..n as u32).map(|v| (Rational::zero(), v)).collect();
        for &c in order.iter().rev() {
            // running extremes over the children processed so far
            let mut best_max: Option<(Rational, u32)> = None;
            let mut best_min: Option<(Rational, u32)> = None;
            for &(w, idx) in graph.neighbors(c) {
                if parent[w as usize].map(|(p, _)| p) != Some(c) {
                    continue;
                }
                let a_max = (&edge_err[idx] + &down_max[w as usize].0, down_max[w as usize].1);
                let a_min = (&edge_err[idx] + &down_min[w as usize].0, down_min[w as usize].1);
                // pairs (c, descendant)
                if a_max.0 > max_val.0 {
                    max_val = (a_max.0.clone(), c, a_max.1);
                }
                if a_min.0 < min_val.0 {
                    min_val = (a_min.0.clone(), c, a_min.1);
                }
                // pairs of descendants of two different children
                if let Some((bm, bw)) = &best_max {
                    let combined = bm + &a_max.0;
                    if combined > max_val.0 {
                        max_val = (combined, *bw, a_max.1);
                    }
                }
                if let Some((bm, bw)) = &best_min {
                    let combined = bm + &a_min.0;
                    if combined < min_val.0 {
                        min_val = (combined, *bw, a_min.1);
                    }
                }
                if best_max.as_ref().map_or(true, |(bm, _)| a_max.0 > *bm) {
                    best_max = Some(a_max.clone());
                }
                if best_min.as_ref().map_or(true, |(bm, _)| a_min.0 < *bm) {
                    best_min = Some(a_min.clone());
                }
                if a_max.0 > down_max[c as usize].0 {
                    down_max[c as usize] = a_max;
                }
                if a_min.0 < down_min[c as usize].0 {
                    down_min[c as usize] = a_min;
                }
            }
        }
    }

    let worst = if max_val.0.abs() >= min_val.0.abs() {
        max_val.clone()
    } else {
        min_val.clone()
    };
    let mut passed = true;
    let mut witness = None;
    for (value, u, v) in [&max_val, &min_val] .map(|t| (t.0.clone(), t.1, t.2)) {
        if passed && !bound_ok(&value, epsilon, comparison) {
            passed = false;
            witness = Some(Witness {
                u,
                v,
                description: condition1_text(&value),
            });
        }
    }
    VerificationReport {
        level,
        comparison,
        epsilon: epsilon.clone(),
        passed,
        worst_error: worst.0,
        witness,
    }
}

fn condition1_text(err: &Rational) -> String {
    let mut s = String::from("shortest-path weight changes by ");
    s.push_str(&crate::rational::format_rational(err));
    s
}

fn verify_general(
    graph: &WeightedGraph,
    rounding: &Rounding,
    epsilon: &Rational,
    level: VerificationLevel,
    comparison: Comparison,
) -> Result<VerificationReport, VerifyError> {
    let n = graph.vertex_count();
    let mut lcm = denominator_lcm(graph.edges().iter().map(|e| &e.weight));
    lcm = num_integer::lcm(lcm, epsilon.denom().clone());
    let original = scaled_original(graph, &lcm);
    let rounded = scaled_rounded(graph, rounding, &lcm)?;
    let eps_scaled = epsilon.numer() * (&lcm / epsilon.denom());

    let mut worst = WorstError::new();
    let mut passed = true;
    let mut witness: Option<Witness> = None;
    let fail = |w: &mut Option<Witness>, u: u32, v: u32, description: String| {
        if w.is_none() {
            *w = Some(Witness { u, v, description });
        }
    };

    for u in 0..n as u32 {
        let stats = tight_path_stats(graph, &original, &rounded, u, DEFAULT_CLUSTER_BUDGET)?;
        let rounded_dist;
        let strong_stats;
        match level {
            VerificationLevel::PathOblivious => {
                rounded_dist = None;
                strong_stats = None;
            }
            VerificationLevel::Weak => {
                rounded_dist = Some(dijkstra(graph, &rounded, u));
                strong_stats = None;
            }
            VerificationLevel::Strong => {
                let s =
                    tight_path_stats(graph, &rounded, &original, u, DEFAULT_CLUSTER_BUDGET)?;
                rounded_dist = None;
                strong_stats = Some(s);
            }
        }
        for v in (u + 1)..n as u32 {
            let Some(d) = &stats.dist[v as usize] else {
                continue; // different components are skipped
            };
            let err_lo = stats.min_s[v as usize].as_ref().unwrap() - d;
            let err_hi = stats.max_s[v as usize].as_ref().unwrap() - d;
            for err in [&err_lo, &err_hi] {
                worst.update(Rational::new(err.clone(), lcm.clone()), u, v);
                let ok = match comparison {
                    Comparison::Strict => err.abs() < eps_scaled,
                    Comparison::Closed => err.abs() <= eps_scaled,
                };
                if !ok && passed {
                    passed = false;
                    fail(
                        &mut witness,
                        u,
                        v,
                        condition1_text(&Rational::new(err.clone(), lcm.clone())),
                    );
                }
            }
            if level >= VerificationLevel::Weak {
                // every original shortest path keeps the rounded distance
                let d_rounded = match (&rounded_dist, &strong_stats) {
                    (Some(dist), _) => dist[v as usize].as_ref().unwrap(),
                    (_, Some(s)) => s.dist[v as usize].as_ref().unwrap(),
                    _ => unreachable!(),
                };
                if stats.max_s[v as usize].as_ref().unwrap() != d_rounded && passed {
                    passed = false;
                    fail(
                        &mut witness,
                        u,
                        v,
                        String::from(
                            "an original shortest path is no longer shortest after rounding",
                        ),
                    );
                }
            }
            if let Some(s) = &strong_stats {
                // every rounded shortest path was already shortest
                if s.max_s[v as usize].as_ref().unwrap() != d && passed {
                    passed = false;
                    fail(
                        &mut witness,
                        u,
                        v,
                        String::from("a rounded shortest path was not originally shortest"),
                    );
                }
            }
        }
    }

    Ok(VerificationReport {
        level,
        comparison,
        epsilon: epsilon.clone(),
        passed,
        worst_error: worst.value,
        witness,
    })
}
