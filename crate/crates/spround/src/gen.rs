//! Seeded random tree generation: uniform random attachment with weights
//! drawn as `num/den`, `den` uniform in `1..=max_denominator` and `num`
//! uniform in `1..=max_weight * den`. Identical seeds give identical trees.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spround_core::graph::WeightedGraph;
use spround_core::rational::ratio;

#[derive(Debug, Clone, Copy)]
pub struct TreeGenConfig {
    pub vertices: usize,
    pub max_denominator: u32,
    pub max_weight: u32,
}

impl Default for TreeGenConfig {
    fn default() -> Self {
        TreeGenConfig {
            vertices: 10,
            max_denominator: 100,
            max_weight: 4,
        }
    }
}

/// Generates a random tree; each vertex `v >= 1` attaches to a uniformly
/// random earlier vertex.
pub fn random_tree(seed: u64, config: &TreeGenConfig) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(&mut rng, config)
}

/// As [`random_tree`], drawing from a caller-provided stream.
pub fn random_tree_with(rng: &mut ChaCha8Rng, config: &TreeGenConfig) -> WeightedGraph {
    let n = config.vertices.max(1);
    let edges: Vec<_> = (1..n as u32)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            let den = rng.gen_range(1..=config.max_denominator.max(1)) as i64;
            let num = rng.gen_range(1..=(config.max_weight.max(1) as i64) * den);
            (parent, v, ratio(num, den))
        })
        .collect();
    WeightedGraph::from_edges(n, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_tree() {
        let config = TreeGenConfig {
            vertices: 40,
            ..TreeGenConfig::default()
        };
        assert_eq!(random_tree(7, &config), random_tree(7, &config));
        assert_ne!(random_tree(7, &config), random_tree(8, &config));
    }

    #[test]
    fn output_is_a_tree() {
        for seed in 0..10 {
            let g = random_tree(
                seed,
                &TreeGenConfig {
                    vertices: 25,
                    ..TreeGenConfig::default()
                },
            );
            assert!(g.is_forest());
            assert!(g.is_connected());
            assert_eq!(g.edge_count(), 24);
        }
    }
}
