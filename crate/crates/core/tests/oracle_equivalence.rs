//! Cross-validation of the tree decision procedure against exhaustive
//! enumeration, on a grid of thresholds and both comparison modes.

mod common;

use common::{random_quarter_tree, random_tree_graph, rng, rooted};
use spround_core::graph::RootedTree;
use spround_core::oracle;
use spround_core::rational::{ratio, Rational};
use spround_core::tree;
use spround_core::verify::{verify_rounding, Comparison, VerificationLevel};

fn epsilon_grid() -> Vec<Rational> {
    [(1, 4), (1, 2), (3, 4), (7, 8), (1, 1), (5, 4), (3, 2), (7, 4)]
        .iter()
        .map(|&(n, d)| ratio(n, d))
        .collect()
}

#[test]
fn decide_matches_brute_force_on_quarter_grid() {
    let mut rng = rng(0x5eed_0001);
    let mut checked = 0usize;
    for round in 0..60 {
        let n = 2 + (round % 8);
        let graph = random_quarter_tree(&mut rng, n);
        let tree = rooted(&graph, 0);
        for epsilon in epsilon_grid() {
            for comparison in [Comparison::Strict, Comparison::Closed] {
                let fast = tree::decide(&tree, &epsilon, comparison);
                let slow = oracle::brute_force_decide(
                    &graph,
                    &epsilon,
                    VerificationLevel::PathOblivious,
                    comparison,
                    1 << 22,
                )
                .unwrap();
                assert_eq!(
                    fast,
                    slow.is_some(),
                    "disagreement on n={n} eps={epsilon} {comparison:?}: {graph:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 900);
}

#[test]
fn witnesses_are_sound_whenever_decide_says_yes() {
    let mut rng = rng(0x5eed_0002);
    for round in 0..40 {
        let n = 2 + (round % 8);
        let graph = random_quarter_tree(&mut rng, n);
        let tree = rooted(&graph, 0);
        for epsilon in epsilon_grid() {
            for comparison in [Comparison::Strict, Comparison::Closed] {
                if !tree::decide(&tree, &epsilon, comparison) {
                    assert_eq!(tree::extract_rounding(&tree, &epsilon, comparison), None);
                    continue;
                }
                let witness = tree::extract_rounding(&tree, &epsilon, comparison)
                    .expect("decide said yes");
                let report = verify_rounding(
                    &graph,
                    &witness,
                    &epsilon,
                    VerificationLevel::Strong,
                    comparison,
                )
                .unwrap();
                assert!(
                    report.passed,
                    "witness fails at eps={epsilon} {comparison:?}: {graph:?} {witness:?}"
                );
            }
        }
    }
}

#[test]
fn decide_is_root_independent() {
    let mut rng = rng(0x5eed_0003);
    for round in 0..30 {
        let n = 2 + (round % 7);
        let graph = random_quarter_tree(&mut rng, n);
        for epsilon in [ratio(1, 2), ratio(1, 1), ratio(3, 2)] {
            for comparison in [Comparison::Strict, Comparison::Closed] {
                let reference = tree::decide(&rooted(&graph, 0), &epsilon, comparison);
                for root in 1..n as u32 {
                    let tree = rooted(&graph, root);
                    assert_eq!(
                        tree::decide(&tree, &epsilon, comparison),
                        reference,
                        "root {root} differs at eps={epsilon} {comparison:?}: {graph:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn decide_is_monotone_in_epsilon() {
    let mut rng = rng(0x5eed_0004);
    let grid = epsilon_grid();
    for round in 0..30 {
        let n = 2 + (round % 8);
        let graph = random_quarter_tree(&mut rng, n);
        let tree = rooted(&graph, 0);
        for comparison in [Comparison::Strict, Comparison::Closed] {
            let answers: Vec<bool> = grid
                .iter()
                .map(|e| tree::decide(&tree, e, comparison))
                .collect();
            for pair in answers.windows(2) {
                assert!(
                    !pair[0] || pair[1],
                    "monotonicity violated on {graph:?} ({comparison:?}): {answers:?}"
                );
            }
        }
    }
}

#[test]
fn minimize_matches_brute_force() {
    let mut rng = rng(0x5eed_0005);
    for round in 0..60 {
        let n = 2 + (round % 7); // up to 8 vertices
        let graph = random_tree_graph(&mut rng, n, 6, 4);
        let tree = rooted(&graph, 0);
        let (eps, witness) = tree::minimize_epsilon(&tree);
        let reference = oracle::brute_force_min_epsilon(&graph, 1 << 22).unwrap();
        assert_eq!(eps, reference, "min-eps differs on {graph:?}");
        let report = verify_rounding(
            &graph,
            &witness,
            &eps,
            VerificationLevel::Strong,
            Comparison::Closed,
        )
        .unwrap();
        assert!(report.passed, "witness not optimal on {graph:?}");
    }
}

#[test]
fn range_sets_match_enumerated_local_optima() {
    let mut rng = rng(0x5eed_0006);
    for round in 0..40 {
        let n = 2 + (round % 6); // up to 7 vertices
        let graph = random_quarter_tree(&mut rng, n);
        let root = (round % n) as u32;
        let tree = rooted(&graph, root);
        for epsilon in [ratio(3, 4), ratio(1, 1), ratio(3, 2)] {
            for comparison in [Comparison::Strict, Comparison::Closed] {
                let computed: Vec<(Rational, Rational)> =
                    tree::error_range_set(&tree, &epsilon, comparison)
                        .unwrap()
                        .into_iter()
                        .map(|r| (r.lo, r.hi))
                        .collect();
                let reference = oracle::brute_force_error_range_set(
                    &tree,
                    &epsilon,
                    comparison,
                    1 << 22,
                )
                .unwrap();
                assert_eq!(
                    computed, reference,
                    "range set differs on root={root} eps={epsilon} {comparison:?}: {graph:?}"
                );
            }
        }
    }
}

#[test]
fn all_sets_respect_antichain_and_size_bound() {
    let mut rng = rng(0x5eed_0007);
    for round in 0..40 {
        let n = 2 + (round % 8);
        let graph = random_quarter_tree(&mut rng, n);
        let tree = rooted(&graph, 0);
        for epsilon in epsilon_grid() {
            for comparison in [Comparison::Strict, Comparison::Closed] {
                let Ok(analysis) = tree::RangeSetAnalysis::compute(&tree, &epsilon, comparison)
                else {
                    panic!("grid thresholds are below 2");
                };
                for (set, size) in analysis.all_sets() {
                    assert!(tree::ranges::is_antichain(set));
                    assert!(
                        set.len() <= 2 * size,
                        "set of {} ranges for a {size}-vertex subtree",
                        set.len()
                    );
                }
            }
        }
    }
}

#[test]
fn backtracking_pinning_is_sound() {
    // counting solutions with pins must equal filtering the full enumeration
    let mut rng = rng(0x5eed_0008);
    for round in 0..10 {
        let n = 3 + (round % 4);
        let graph = random_quarter_tree(&mut rng, n);
        let epsilon = ratio(5, 4);
        let all = oracle::valid_roundings(
            &graph,
            &epsilon,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            1 << 16,
        )
        .unwrap();
        // pin the first fractional edge down
        let Some(edge) = graph.edges().iter().find(|e| !e.weight.is_integer()) else {
            continue;
        };
        let mut pins = oracle::Pins::new();
        pins.insert((edge.u, edge.v), oracle::PinDirection::Down);
        let floor: u64 = edge.weight.floor().to_integer().try_into().unwrap();
        let mut pinned = oracle::backtracking_solutions(
            &graph,
            &epsilon,
            VerificationLevel::PathOblivious,
            Comparison::Strict,
            &pins,
            1 << 22,
        )
        .unwrap();
        let mut filtered: Vec<_> = all
            .into_iter()
            .filter(|r| r.get(edge.u, edge.v) == Some(floor))
            .collect();
        let key = |r: &spround_core::Rounding| {
            r.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>()
        };
        pinned.sort_by_key(key);
        filtered.sort_by_key(key);
        assert_eq!(pinned, filtered, "pinning mismatch on {graph:?}");
    }
}

#[test]
fn two_rounding_passes_at_two_for_random_trees() {
    let mut rng = rng(0x5eed_0009);
    for round in 0..50 {
        let n = 2 + (round % 30);
        let graph = random_tree_graph(&mut rng, n, 20, 6);
        let tree = rooted(&graph, 0);
        let rounding = tree::two_rounding(&tree);
        let report = verify_rounding(
            &graph,
            &rounding,
            &ratio(2, 1),
            VerificationLevel::Strong,
            Comparison::Strict,
        )
        .unwrap();
        assert!(report.passed, "2-rounding failed on {graph:?}");
    }
}

#[test]
fn single_vertex_tree_minimizes_to_zero() {
    let graph = spround_core::WeightedGraph::from_edges(1, Vec::new()).unwrap();
    let tree = RootedTree::from_graph(&graph, 0).unwrap();
    let (eps, witness) = tree::minimize_epsilon(&tree);
    assert_eq!(eps, ratio(0, 1));
    assert!(witness.is_empty());
}
