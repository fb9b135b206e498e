//! The interval algebra behind the tree decision procedure.
//!
//! For a rooted tree and a rounding, the *root error range* is the smallest
//! interval containing the signed rounding errors of all root-to-vertex
//! paths; it always contains 0. The *error range set* of a subtree is the
//! antichain of root error ranges realizable by locally optimal roundings
//! (no other rounding's range is strictly contained in one of them). Sets are
//! kept sorted ascending in both endpoints and have at most `2n` elements for
//! an `n`-vertex subtree.
//!
//! Three operations build the sets bottom-up:
//!
//! * [`filter`] — reduce a lexicographically sorted candidate list to the
//!   maximal antichain (single stack-based scan);
//! * [`lift`] — extend a subtree's set over its parent edge, trying the four
//!   admissible integer offsets of the edge weight;
//! * [`merge`] — combine the sets of two subtrees sharing only their root,
//!   via a three-pointer scan over feasible combinations.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::{floor_int, frac_part, rat, Rational};
use crate::verify::Comparison;

/// A closed interval of signed rounding errors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ErrorRange {
    pub lo: Rational,
    pub hi: Rational,
}

impl ErrorRange {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        ErrorRange { lo, hi }
    }

    /// The point interval [0, 0] of a bare root.
    pub fn zero() -> Self {
        ErrorRange {
            lo: Rational::zero(),
            hi: Rational::zero(),
        }
    }
}

/// How a range in a set arose; indexes refer to the source set(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// the [0,0] range of a leaf subtree
    Leaf,
    /// lifted over a parent edge rounded to floor(weight) + offset
    Lift { offset: i8, source: usize },
    /// combination of a range from each of two merged sets
    Merge { left: usize, right: usize },
}

/// True if the ranges are strictly ascending in both endpoints (an
/// antichain in which no range contains another).
pub fn is_antichain(ranges: &[ErrorRange]) -> bool {
    ranges
        .windows(2)
        .all(|w| w[0].lo < w[1].lo && w[0].hi < w[1].hi)
}

fn is_lex_sorted(ranges: &[ErrorRange]) -> bool {
    ranges
        .windows(2)
        .all(|w| (&w[0].lo, &w[0].hi) <= (&w[1].lo, &w[1].hi))
}

/// Reduces a lexicographically sorted list of intervals to its maximal
/// antichain: an interval survives iff it contains no other interval of the
/// list. On exact duplicates the first occurrence is kept.
pub fn filter(candidates: Vec<ErrorRange>) -> Vec<ErrorRange> {
    filter_with(candidates.into_iter().map(|r| (r, ())).collect())
        .into_iter()
        .map(|(r, ())| r)
        .collect()
}

/// [`filter`] carrying per-range payloads (used for provenance).
pub(crate) fn filter_with<P>(candidates: Vec<(ErrorRange, P)>) -> Vec<(ErrorRange, P)> {
    debug_assert!(is_lex_sorted(
        &candidates.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>()
    ));
    let mut out: Vec<(ErrorRange, P)> = Vec::with_capacity(candidates.len());
    'scan: for (range, payload) in candidates {
        while let Some((top, _)) = out.last() {
            if *top == range {
                continue 'scan; // duplicate: keep the first
            }
            if top.hi >= range.hi {
                out.pop(); // top strictly contains the new range
            } else {
                break;
            }
        }
        if let Some((top, _)) = out.last() {
            if top.lo == range.lo {
                continue; // new range strictly contains the top
            }
        }
        out.push((range, payload));
    }
    out
}

fn lower_ok(value: &Rational, epsilon: &Rational, comparison: Comparison) -> bool {
    match comparison {
        Comparison::Strict => *value > -epsilon.clone(),
        Comparison::Closed => *value >= -epsilon.clone(),
    }
}

fn upper_ok(value: &Rational, epsilon: &Rational, comparison: Comparison) -> bool {
    match comparison {
        Comparison::Strict => *value < *epsilon,
        Comparison::Closed => *value <= *epsilon,
    }
}

/// Extends the error range set of a subtree `T_u` over the edge to its
/// parent, producing the set of `T_u` plus that edge, rooted at the parent.
///
/// The edge may be rounded to `floor(w) + k` for `k` in `{-1, 0, 1, 2}`
/// (with `floor(w) + k >= 0`); each feasible combination shifts a source
/// range by `k - frac(w)` and re-closes it over 0.
pub fn lift(
    child_set: &[ErrorRange],
    edge_weight: &Rational,
    epsilon: &Rational,
    comparison: Comparison,
) -> Vec<ErrorRange> {
    lift_with_provenance(child_set, edge_weight, epsilon, comparison)
        .into_iter()
        .map(|(r, _)| r)
        .collect()
}

pub(crate) fn lift_with_provenance(
    child_set: &[ErrorRange],
    edge_weight: &Rational,
    epsilon: &Rational,
    comparison: Comparison,
) -> Vec<(ErrorRange, Origin)> {
    let floor = floor_int(edge_weight);
    let frac = frac_part(edge_weight);
    let zero = Rational::zero();
    // one lexicographically sorted stream per offset
    let mut streams: Vec<Vec<(ErrorRange, Origin)>> = Vec::with_capacity(4);
    for k in -1i8..=2 {
        if (&floor + k) < num_bigint::BigInt::zero() {
            continue; // rounded weight must stay non-negative
        }
        let shift = rat(k as i64) - &frac;
        let mut stream = Vec::new();
        for (idx, range) in child_set.iter().enumerate() {
            let lo = &range.lo + &shift;
            let hi = &range.hi + &shift;
            if lower_ok(&lo, epsilon, comparison) && upper_ok(&hi, epsilon, comparison) {
                stream.push((
                    ErrorRange::new(lo.min(zero.clone()), hi.max(zero.clone())),
                    Origin::Lift {
                        offset: k,
                        source: idx,
                    },
                ));
            }
        }
        streams.push(stream);
    }
    filter_with(merge_sorted_streams(streams))
}

/// k-way merge of lexicographically sorted streams, stable across streams in
/// their given order (ties go to the earlier stream).
fn merge_sorted_streams(streams: Vec<Vec<(ErrorRange, Origin)>>) -> Vec<(ErrorRange, Origin)> {
    let total = streams.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(total);
    let mut pos = alloc::vec![0usize; streams.len()];
    loop {
        let mut best: Option<usize> = None;
        for i in 0..streams.len() {
            if pos[i] >= streams[i].len() {
                continue;
            }
            let candidate = &streams[i][pos[i]].0;
            let better = match best {
                None => true,
                Some(b) => {
                    let current = &streams[b][pos[b]].0;
                    (&candidate.lo, &candidate.hi) < (&current.lo, &current.hi)
                }
            };
            if better {
                best = Some(i);
            }
        }
        match best {
            None => break,
            Some(i) => {
                out.push(streams[i][pos[i]].clone());
                pos[i] += 1;
            }
        }
    }
    out
}

/// Combines the error range sets of two subtrees that share only their root.
///
/// A pair of ranges is feasible iff the sums of the lower and of the upper
/// bounds respect the error bound; the combined range is the union of the
/// two. A three-pointer scan finds, for each range of one set, the single
/// relevant partner in the other.
pub fn merge(
    left: &[ErrorRange],
    right: &[ErrorRange],
    epsilon: &Rational,
    comparison: Comparison,
) -> Vec<ErrorRange> {
    merge_with_provenance(left, right, epsilon, comparison)
        .into_iter()
        .map(|(r, _)| r)
        .collect()
}

pub(crate) fn merge_with_provenance(
    left: &[ErrorRange],
    right: &[ErrorRange],
    epsilon: &Rational,
    comparison: Comparison,
) -> Vec<(ErrorRange, Origin)> {
    debug_assert!(is_antichain(left) && is_antichain(right));
    // type 1: the left range has the strictly smaller lower bound
    let s1 = scan_combinations(left, right, epsilon, comparison, true);
    // type 2: ties and the rest, with the roles swapped
    let s2 = scan_combinations(right, left, epsilon, comparison, false);
    let mut merged = Vec::with_capacity(s1.len() + s2.len());
    let (mut i, mut j) = (0, 0);
    while i < s1.len() || j < s2.len() {
        let take_s1 = match (s1.get(i), s2.get(j)) {
            (Some((a, _)), Some((b, _))) => (&a.lo, &a.hi) <= (&b.lo, &b.hi),
            (Some(_), None) => true,
            _ => false,
        };
        if take_s1 {
            let (r, (li, ri)) = s1[i].clone();
            merged.push((r, Origin::Merge { left: li, right: ri }));
            i += 1;
        } else {
            let (r, (ri, li)) = s2[j].clone();
            merged.push((r, Origin::Merge { left: li, right: ri }));
            j += 1;
        }
    }
    filter_with(merged)
}

/// For each range of `primary`, finds the lowest-index feasible partner in
/// `other` and emits their combination. `strict_partition` selects whether
/// the partner's lower bound must be strictly greater (type 1) or at most
/// equal (type 2, which also takes ties).
///
/// Returns combinations tagged `(primary index, other index)`.
fn scan_combinations(
    primary: &[ErrorRange],
    other: &[ErrorRange],
    epsilon: &Rational,
    comparison: Comparison,
    strict_partition: bool,
) -> Vec<(ErrorRange, (usize, usize))> {
    let len = other.len();
    let mut out = Vec::new();
    // first index whose lower bound is on the primary's side of the partition
    let mut i1 = 0usize;
    // first index satisfying the lower-bound feasibility (descends as the
    // primary's lower bound rises)
    let mut i2 = len;
    // last index satisfying the upper-bound feasibility (descends too)
    let mut i3 = len as isize - 1;
    for (p_idx, p) in primary.iter().enumerate() {
        if strict_partition {
            while i1 < len && other[i1].lo <= p.lo {
                i1 += 1;
            }
        } else {
            while i1 < len && other[i1].lo < p.lo {
                i1 += 1;
            }
        }
        while i2 > 0 && lower_ok(&(&other[i2 - 1].lo + &p.lo), epsilon, comparison) {
            i2 -= 1;
        }
        while i3 >= 0 && !upper_ok(&(&other[i3 as usize].hi + &p.hi), epsilon, comparison) {
            i3 -= 1;
        }
        let chosen = i1.max(i2);
        if chosen < len && (chosen as isize) <= i3 {
            let partner = &other[chosen];
            out.push((
                ErrorRange::new(p.lo.clone(), p.hi.clone().max(partner.hi.clone())),
                (p_idx, chosen),
            ));
        }
    }
    out
}
