//! 1-rounding of path-shaped graphs in linear time.
//!
//! With `d_i = 1/2 + sum of the first i weights`, setting the i-th rounded
//! weight to `floor(d_i) - floor(d_{i-1})` keeps the signed error of every
//! contiguous subpath strictly inside `(-1, 1)`.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::graph::WeightedGraph;
use crate::rational::{floor_int, ratio, Rational};

/// A path graph given by its edge weights in order. May be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathInstance {
    weights: Vec<Rational>,
}

impl PathInstance {
    /// Builds a path instance; all weights must be non-negative.
    pub fn new(weights: Vec<Rational>) -> Result<Self, crate::graph::GraphError> {
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(crate::graph::GraphError::NegativeWeight {
                u: i as u32,
                v: i as u32 + 1,
            });
        }
        Ok(PathInstance { weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The path as a graph on `len + 1` vertices (empty paths give the
    /// single-vertex graph).
    pub fn to_graph(&self) -> WeightedGraph {
        let n = self.weights.len() + 1;
        WeightedGraph::from_edges(
            n,
            self.weights
                .iter()
                .enumerate()
                .map(|(i, w)| (i as u32, i as u32 + 1, w.clone())),
        )
        .expect("path edges are canonical")
    }
}

/// Computes the 1-rounding of a path by prefix-sum floors.
pub fn round_path(path: &PathInstance) -> Vec<u64> {
    round_path_with_offset(path.weights(), &ratio(1, 2))
}

/// Prefix-floor rounding with an explicit offset; `round_path` fixes the
/// offset at 1/2. Any offset yields errors within (-1, 1) on every subpath.
pub(crate) fn round_path_with_offset(weights: &[Rational], offset: &Rational) -> Vec<u64> {
    let mut out = Vec::with_capacity(weights.len());
    let mut prefix = offset.clone();
    let mut prev_floor = floor_int(&prefix);
    for w in weights {
        prefix += w;
        let f = floor_int(&prefix);
        let step = &f - &prev_floor;
        out.push(u64::try_from(step).expect("floors are non-decreasing and fit u64"));
        prev_floor = f;
    }
    out
}
