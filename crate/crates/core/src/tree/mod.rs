//! Rounding of trees: deciding whether an epsilon-rounding exists, producing
//! a witness when it does, the always-available 2-rounding, and the smallest
//! achievable error threshold.
//!
//! The decision procedure computes, bottom-up, the error range set of every
//! subtree: leaves start at `[0, 0]`, a parent edge is added with [`ranges::lift`],
//! and sibling subtrees are combined with [`ranges::merge`], organized in a
//! balanced binary merge order when a vertex has many children. The tree
//! admits an epsilon-rounding iff the root's set is non-empty; back-pointers
//! recorded along the way turn any surviving range into concrete integer
//! weights.

pub mod ranges;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::graph::{RootedTree, Rounding};
use crate::rational::{floor_int, frac_part, rat, Rational};
use crate::verify::Comparison;

use ranges::{is_antichain, lift_with_provenance, merge_with_provenance, ErrorRange, Origin};

/// Errors from the tree decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeRoundingError {
    /// The four-offset analysis is only valid below an error threshold of 2;
    /// thresholds >= 2 are answered by the 2-rounding instead.
    EpsilonTooLarge,
}

impl fmt::Display for TreeRoundingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeRoundingError::EpsilonTooLarge => {
                write!(f, "error range sets are only defined for epsilon < 2")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TreeRoundingError {}

/// One computed error range set, with enough structure to reconstruct a
/// rounding from any of its ranges.
#[derive(Debug, Clone)]
struct SetRecord {
    kind: RecordKind,
    ranges: Vec<ErrorRange>,
    origins: Vec<Origin>,
    /// number of vertices of the subtree the set describes
    subtree_size: usize,
}

#[derive(Debug, Clone)]
enum RecordKind {
    Leaf,
    /// set of `T_child + {parent(child), child}`, rooted at the parent
    Lift { source: usize, child: u32 },
    Merge { left: usize, right: usize },
}

/// The full bottom-up computation over one tree: every intermediate error
/// range set plus the provenance needed to extract witness roundings.
#[derive(Debug, Clone)]
pub struct RangeSetAnalysis {
    records: Vec<SetRecord>,
    root_record: usize,
}

impl RangeSetAnalysis {
    /// Runs the bottom-up computation. Requires `epsilon < 2`.
    pub fn compute(
        tree: &RootedTree,
        epsilon: &Rational,
        comparison: Comparison,
    ) -> Result<Self, TreeRoundingError> {
        if *epsilon >= rat(2) {
            return Err(TreeRoundingError::EpsilonTooLarge);
        }
        let infeasible = match comparison {
            // even the trivial root-to-root path has error 0, which violates
            // an empty error bound
            Comparison::Strict => !epsilon.is_positive(),
            Comparison::Closed => epsilon.is_negative(),
        };
        let n = tree.vertex_count();
        let mut records: Vec<SetRecord> = Vec::with_capacity(2 * n);
        let mut record_of: Vec<usize> = vec![usize::MAX; n];
        for &v in &tree.postorder() {
            let children = tree.children(v);
            let record = if children.is_empty() {
                SetRecord {
                    kind: RecordKind::Leaf,
                    ranges: if infeasible {
                        Vec::new()
                    } else {
                        vec![ErrorRange::zero()]
                    },
                    origins: if infeasible {
                        Vec::new()
                    } else {
                        vec![Origin::Leaf]
                    },
                    subtree_size: 1,
                }
            } else {
                // lift every child's set over its parent edge, then combine
                // the lifted sets pairwise, level by level
                let mut layer: Vec<usize> = Vec::with_capacity(children.len());
                for &c in children {
                    let source = record_of[c as usize];
                    let weight = tree.parent_edge_weight(c).expect("child has a parent edge");
                    let lifted = lift_with_provenance(
                        &records[source].ranges,
                        weight,
                        epsilon,
                        comparison,
                    );
                    let (ranges, origins) = split(lifted);
                    records.push(SetRecord {
                        kind: RecordKind::Lift { source, child: c },
                        ranges,
                        origins,
                        subtree_size: records[source].subtree_size + 1,
                    });
                    layer.push(records.len() - 1);
                }
                while layer.len() > 1 {
                    let mut next = Vec::with_capacity(layer.len() / 2 + 1);
                    for pair in layer.chunks(2) {
                        if let &[left, right] = pair {
                            let merged = merge_with_provenance(
                                &records[left].ranges,
                                &records[right].ranges,
                                epsilon,
                                comparison,
                            );
                            let (ranges, origins) = split(merged);
                            let subtree_size = records[left].subtree_size
                                + records[right].subtree_size
                                - 1;
                            records.push(SetRecord {
                                kind: RecordKind::Merge { left, right },
                                ranges,
                                origins,
                                subtree_size,
                            });
                            next.push(records.len() - 1);
                        } else {
                            next.push(pair[0]);
                        }
                    }
                    layer = next;
                }
                let idx = layer[0];
                debug_assert_eq!(records[idx].subtree_size, subtree_count(tree, v));
                record_of[v as usize] = idx;
                continue;
            };
            records.push(record);
            record_of[v as usize] = records.len() - 1;
        }
        let root_record = record_of[tree.root() as usize];
        debug_assert!(records
            .iter()
            .all(|r| is_antichain(&r.ranges) && r.ranges.len() <= 2 * r.subtree_size));
        Ok(RangeSetAnalysis {
            records,
            root_record,
        })
    }

    /// The error range set of the whole tree.
    pub fn root_ranges(&self) -> &[ErrorRange] {
        &self.records[self.root_record].ranges
    }

    /// Every intermediate set as `(ranges, subtree vertex count)`.
    pub fn all_sets(&self) -> impl Iterator<Item = (&[ErrorRange], usize)> {
        self.records
            .iter()
            .map(|r| (r.ranges.as_slice(), r.subtree_size))
    }

    /// Reconstructs a rounding realizing the root range at `range_index` by
    /// following the recorded back-pointers.
    pub fn extract(&self, tree: &RootedTree, range_index: usize) -> Option<Rounding> {
        if range_index >= self.root_ranges().len() {
            return None;
        }
        let mut rounding = Rounding::new();
        let mut work = vec![(self.root_record, range_index)];
        while let Some((rec_idx, rng_idx)) = work.pop() {
            let record = &self.records[rec_idx];
            match (&record.kind, &record.origins[rng_idx]) {
                (RecordKind::Leaf, Origin::Leaf) => {}
                (RecordKind::Lift { source, child }, Origin::Lift { offset, source: s }) => {
                    let weight = tree.parent_edge_weight(*child).unwrap();
                    let value = floor_int(weight) + *offset;
                    let value = u64::try_from(value).expect("clamped to non-negative");
                    let parent = tree.parent(*child).unwrap();
                    rounding.set(parent, *child, value);
                    work.push((*source, *s));
                }
                (RecordKind::Merge { left, right }, Origin::Merge { left: l, right: r }) => {
                    work.push((*left, *l));
                    work.push((*right, *r));
                }
                _ => unreachable!("origin kind matches record kind"),
            }
        }
        Some(rounding)
    }
}

fn split(items: Vec<(ErrorRange, Origin)>) -> (Vec<ErrorRange>, Vec<Origin>) {
    items.into_iter().unzip()
}

fn subtree_count(tree: &RootedTree, v: u32) -> usize {
    let mut count = 0;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        count += 1;
        stack.extend_from_slice(tree.children(x));
    }
    count
}

/// The error range set of the whole tree at the given threshold.
/// Requires `epsilon < 2`; larger thresholds always admit a rounding and are
/// handled by [`decide`] directly.
pub fn error_range_set(
    tree: &RootedTree,
    epsilon: &Rational,
    comparison: Comparison,
) -> Result<Vec<ErrorRange>, TreeRoundingError> {
    RangeSetAnalysis::compute(tree, epsilon, comparison).map(|a| a.root_ranges().to_vec())
}

/// Decides whether the tree admits an epsilon-rounding. Thresholds of 2 or
/// more are answered immediately (the 2-rounding always exists); below that
/// the error range set of the root decides.
pub fn decide(tree: &RootedTree, epsilon: &Rational, comparison: Comparison) -> bool {
    if *epsilon >= rat(2) {
        return true;
    }
    match RangeSetAnalysis::compute(tree, epsilon, comparison) {
        Ok(analysis) => !analysis.root_ranges().is_empty(),
        Err(TreeRoundingError::EpsilonTooLarge) => unreachable!("epsilon < 2 here"),
    }
}

/// Produces an epsilon-rounding of the tree, or `None` if none exists.
pub fn extract_rounding(
    tree: &RootedTree,
    epsilon: &Rational,
    comparison: Comparison,
) -> Option<Rounding> {
    if *epsilon >= rat(2) {
        return Some(two_rounding(tree));
    }
    let analysis = RangeSetAnalysis::compute(tree, epsilon, comparison)
        .expect("epsilon < 2 here");
    analysis.extract(tree, 0)
}

/// The linear-time 2-rounding: round every root-to-vertex distance down and
/// give each edge the difference of its endpoints' floors. Every path error
/// is strictly below 2.
pub fn two_rounding(tree: &RootedTree) -> Rounding {
    let dist = tree.root_distances();
    let floors: Vec<_> = dist.iter().map(floor_int).collect();
    let mut rounding = Rounding::new();
    for v in 0..tree.vertex_count() as u32 {
        if let Some(p) = tree.parent(v) {
            let step = &floors[v as usize] - &floors[p as usize];
            let value = u64::try_from(step).expect("floors grow along root paths");
            rounding.set(p, v, value);
        }
    }
    rounding
}

/// Lengths of all simple paths of the tree, one entry per unordered vertex
/// pair, in ascending order.
pub fn all_path_lengths(tree: &RootedTree) -> Vec<Rational> {
    let n = tree.vertex_count();
    let mut lengths = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    // per vertex: lengths of paths from descendants (and itself) ending there
    let mut ending: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for &v in &tree.postorder() {
        let mut acc = vec![Rational::zero()];
        for &c in tree.children(v) {
            let w = tree.parent_edge_weight(c).unwrap();
            let shifted: Vec<Rational> =
                ending[c as usize].drain(..).map(|l| l + w).collect();
            for l in &shifted {
                for m in &acc {
                    lengths.push(l + m);
                }
            }
            acc.extend(shifted);
        }
        ending[v as usize] = acc;
    }
    lengths.sort();
    lengths
}

/// The smallest achievable maximum absolute rounding error over all simple
/// paths, together with a rounding achieving it.
///
/// The optimum is the least value `c` from the candidate set
/// `{ |k - frac(L)| : L a path length, k in {-1, 0, 1, 2} }` for which an
/// epsilon-rounding with the closed bound `|error| <= c` exists; binary
/// search over the sorted candidates finds it.
pub fn minimize_epsilon(tree: &RootedTree) -> (Rational, Rounding) {
    let mut candidates: Vec<Rational> = vec![Rational::zero()];
    for length in all_path_lengths(tree) {
        let f = frac_part(&length);
        for k in -1i64..=2 {
            candidates.push((rat(k) - &f).abs());
        }
    }
    candidates.sort();
    candidates.dedup();
    // decide(_, closed) is monotone; find the first admissible candidate
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(decide(tree, &candidates[hi], Comparison::Closed));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if decide(tree, &candidates[mid], Comparison::Closed) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let epsilon = candidates[lo].clone();
    let witness = extract_rounding(tree, &epsilon, Comparison::Closed)
        .expect("the chosen threshold is admissible");
    (epsilon, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::rational::ratio;

    fn tree_from(edges: Vec<(u32, u32, Rational)>, root: u32) -> RootedTree {
        let n = edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(1) as usize;
        let g = WeightedGraph::from_edges(n, edges).unwrap();
        RootedTree::from_graph(&g, root).unwrap()
    }

    fn star_half(root: u32) -> RootedTree {
        tree_from(
            vec![
                (0, 1, ratio(1, 2)),
                (0, 2, ratio(1, 2)),
                (0, 3, ratio(1, 2)),
            ],
            root,
        )
    }

    fn er(lo: Rational, hi: Rational) -> ErrorRange {
        ErrorRange::new(lo, hi)
    }

    #[test]
    fn single_vertex_set_is_zero() {
        let g = WeightedGraph::from_edges(1, Vec::new()).unwrap();
        let t = RootedTree::from_graph(&g, 0).unwrap();
        let set = error_range_set(&t, &rat(1), Comparison::Strict).unwrap();
        assert_eq!(set, vec![ErrorRange::zero()]);
    }

    #[test]
    fn star_has_empty_set_at_one() {
        let set = error_range_set(&star_half(0), &rat(1), Comparison::Strict).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn two_half_edges_rooted_at_middle() {
        let t = tree_from(vec![(0, 1, ratio(1, 2)), (1, 2, ratio(1, 2))], 1);
        let set = error_range_set(&t, &rat(1), Comparison::Strict).unwrap();
        assert_eq!(set, vec![er(ratio(-1, 2), ratio(1, 2))]);
    }

    #[test]
    fn two_half_edges_rooted_at_end() {
        let t = tree_from(vec![(0, 1, ratio(1, 2)), (1, 2, ratio(1, 2))], 0);
        let set = error_range_set(&t, &rat(1), Comparison::Strict).unwrap();
        assert_eq!(
            set,
            vec![er(ratio(-1, 2), rat(0)), er(rat(0), ratio(1, 2))]
        );
    }

    #[test]
    fn decide_star_cases() {
        let t = star_half(0);
        assert!(!decide(&t, &rat(1), Comparison::Strict));
        assert!(decide(&t, &rat(1), Comparison::Closed));
        assert!(decide(&t, &rat(2), Comparison::Strict));
        assert!(!decide(&t, &rat(0), Comparison::Strict));
    }

    #[test]
    fn decide_is_root_independent_on_star() {
        for root in 0..4 {
            assert!(!decide(&star_half(root), &rat(1), Comparison::Strict));
            assert!(decide(&star_half(root), &ratio(3, 2), Comparison::Strict));
        }
    }

    #[test]
    fn extract_two_half_edges() {
        let t = tree_from(vec![(0, 1, ratio(1, 2)), (1, 2, ratio(1, 2))], 0);
        let r = extract_rounding(&t, &rat(1), Comparison::Strict).unwrap();
        let a = r.get(0, 1).unwrap();
        let b = r.get(1, 2).unwrap();
        assert!(
            (a, b) == (1, 0) || (a, b) == (0, 1),
            "one edge up, one edge down, got ({a}, {b})"
        );
    }

    #[test]
    fn extract_identity_on_integer_tree() {
        let t = tree_from(vec![(0, 1, rat(3)), (1, 2, rat(7)), (1, 3, rat(2))], 0);
        let r = extract_rounding(&t, &ratio(1, 2), Comparison::Strict).unwrap();
        assert_eq!(r.get(0, 1), Some(3));
        assert_eq!(r.get(1, 2), Some(7));
        assert_eq!(r.get(1, 3), Some(2));
    }

    #[test]
    fn extract_star_is_none_but_two_rounding_exists() {
        let t = star_half(0);
        assert_eq!(extract_rounding(&t, &rat(1), Comparison::Strict), None);
        let r = extract_rounding(&t, &rat(2), Comparison::Strict).unwrap();
        assert_eq!(r, two_rounding(&t));
    }

    #[test]
    fn two_rounding_examples() {
        // star rooted at the centre: every root distance floors to 0
        let r = two_rounding(&star_half(0));
        assert_eq!(r.get(0, 1), Some(0));
        assert_eq!(r.get(0, 2), Some(0));
        assert_eq!(r.get(0, 3), Some(0));

        let single = tree_from(vec![(0, 1, ratio(5, 2))], 0);
        assert_eq!(two_rounding(&single).get(0, 1), Some(2));

        let int_tree = tree_from(vec![(0, 1, rat(3)), (1, 2, rat(4))], 0);
        let r = two_rounding(&int_tree);
        assert_eq!(r.get(0, 1), Some(3));
        assert_eq!(r.get(1, 2), Some(4));
    }

    #[test]
    fn path_lengths_examples() {
        let t = tree_from(vec![(0, 1, rat(1)), (1, 2, rat(2))], 0);
        assert_eq!(all_path_lengths(&t), vec![rat(1), rat(2), rat(3)]);

        let star = star_half(0);
        assert_eq!(
            all_path_lengths(&star),
            vec![
                ratio(1, 2),
                ratio(1, 2),
                ratio(1, 2),
                rat(1),
                rat(1),
                rat(1)
            ]
        );

        let g = WeightedGraph::from_edges(1, Vec::new()).unwrap();
        let single = RootedTree::from_graph(&g, 0).unwrap();
        assert!(all_path_lengths(&single).is_empty());
    }

    #[test]
    fn minimize_examples() {
        let int_tree = tree_from(vec![(0, 1, rat(3)), (1, 2, rat(4))], 0);
        let (eps, witness) = minimize_epsilon(&int_tree);
        assert_eq!(eps, rat(0));
        assert_eq!(witness.get(0, 1), Some(3));

        let single = tree_from(vec![(0, 1, ratio(1, 2))], 0);
        let (eps, witness) = minimize_epsilon(&single);
        assert_eq!(eps, ratio(1, 2));
        assert!(witness.get(0, 1) == Some(0) || witness.get(0, 1) == Some(1));

        let (eps, _) = minimize_epsilon(&star_half(0));
        assert_eq!(eps, rat(1));
    }

    #[test]
    fn epsilon_two_is_rejected_by_the_set_computation() {
        let t = star_half(0);
        assert_eq!(
            error_range_set(&t, &rat(2), Comparison::Strict),
            Err(TreeRoundingError::EpsilonTooLarge)
        );
    }

    #[test]
    fn extracted_witness_matches_its_range() {
        // root the star at a leaf: the set at 3/2 strict should be non-empty
        // and every extracted range must round-trip through verification
        let t = star_half(1);
        let analysis = RangeSetAnalysis::compute(&t, &ratio(3, 2), Comparison::Strict).unwrap();
        assert!(!analysis.root_ranges().is_empty());
        for idx in 0..analysis.root_ranges().len() {
            let rounding = analysis.extract(&t, idx).unwrap();
            let report = crate::verify::verify_rounding(
                &t.to_graph(),
                &rounding,
                &ratio(3, 2),
                crate::verify::VerificationLevel::Strong,
                Comparison::Strict,
            )
            .unwrap();
            assert!(report.passed);
        }
    }
}
