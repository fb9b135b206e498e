//! The path rounding against the graph verifier and its stated bounds.

mod common;

use common::rng;
use num_traits::Signed;
use rand::Rng;
use spround_core::path::{round_path, PathInstance};
use spround_core::rational::{rat, ratio, Rational};
use spround_core::verify::{verify_rounding, Comparison, VerificationLevel};
use spround_core::Rounding;

fn random_path(rng: &mut rand_chacha::ChaCha8Rng, n: usize, max_den: i64) -> PathInstance {
    let weights = (0..n)
        .map(|_| {
            let den = rng.gen_range(1..=max_den);
            let num = rng.gen_range(0..=4 * den);
            ratio(num, den)
        })
        .collect();
    PathInstance::new(weights).unwrap()
}

#[test]
fn outputs_are_valid_one_roundings_of_the_path_graph() {
    let mut rng = rng(0x9a7_0001);
    for round in 0..60 {
        let n = 1 + (round % 40);
        let path = random_path(&mut rng, n, 50);
        let rounded = round_path(&path);
        let graph = path.to_graph();
        let rounding = Rounding::from_pairs(
            rounded
                .iter()
                .enumerate()
                .map(|(i, &v)| ((i as u32, i as u32 + 1), v)),
        );
        let report = verify_rounding(
            &graph,
            &rounding,
            &rat(1),
            VerificationLevel::Strong,
            Comparison::Strict,
        )
        .unwrap();
        assert!(report.passed, "path 1-rounding failed: {:?}", path.weights());
        assert!(report.worst_error.abs() < rat(1));
    }
}

#[test]
fn every_contiguous_subpath_error_is_bounded() {
    let mut rng = rng(0x9a7_0002);
    for _ in 0..20 {
        let n = 1 + rng.gen_range(0..30);
        let path = random_path(&mut rng, n, 100);
        let rounded = round_path(&path);
        for a in 0..n {
            let mut exact = Rational::from_integer(0.into());
            let mut whole = 0u64;
            for z in a..n {
                exact += &path.weights()[z];
                whole += rounded[z];
                let err = rat(whole as i64) - &exact;
                assert!(err.abs() < rat(1), "subpath ({a}, {z}] error {err}");
            }
        }
    }
}

#[test]
fn offsets_never_go_negative() {
    let mut rng = rng(0x9a7_0003);
    for _ in 0..40 {
        let n = 1 + rng.gen_range(0..200);
        let path = random_path(&mut rng, n, 100);
        // u64 output enforces non-negativity by construction; the sum
        // telescopes to the floor of the total weight plus offset effects
        let rounded = round_path(&path);
        assert_eq!(rounded.len(), n);
        let total: u64 = rounded.iter().sum();
        let exact: Rational = path.weights().iter().sum();
        assert!((rat(total as i64) - exact).abs() < rat(1));
    }
}
