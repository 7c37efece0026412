//! Benchmark inputs shared by the criterion targets.

use bgc_core::fixtures::{random_standard_graph, sample_tree};
use bgc_core::{Weight, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `sample_tree` with `n` branching vertices and alternating weights.
pub fn sample_tree_of(n: usize) -> WeightedGraph {
    let w: Vec<Weight> = (0..n as Weight).map(|i| if i % 2 == 0 { i + 1 } else { -i }).collect();
    sample_tree(&w)
}

/// Deterministic sample of random standard graphs.
pub fn random_standard(seed: u64, count: usize, max_vertices: usize) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_standard_graph(&mut rng, max_vertices)).collect()
}
