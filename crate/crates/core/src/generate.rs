//! Seeded random instances for tests, examples and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Weight, WeightedGraph};
use crate::weights::{gen_weights, WeightGenSpec};

/// Erdős–Rényi G(n, p) with weights from `weights`; edges from a ChaCha8
/// stream seeded with `seed`.
pub fn gnp(n: usize, p: f64, weights: &WeightGenSpec, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges, gen_weights(n, weights)).expect("generated graph is valid")
}

/// Convenience wrapper: uniform weights in `[lo, hi]`, weight seed derived
/// from the graph seed.
pub fn gnp_uniform(n: usize, p: f64, lo: Weight, hi: Weight, seed: u64) -> WeightedGraph {
    let spec = WeightGenSpec::uniform(lo, hi, seed ^ 0x9E6C_63D0_676A_9A99).expect("valid bounds");
    gnp(n, p, &spec, seed)
}

pub fn complete(weights: Vec<Weight>) -> WeightedGraph {
    let n = weights.len();
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    WeightedGraph::from_edges(n, &edges, weights).expect("valid clique")
}

pub fn cycle(weights: Vec<Weight>) -> WeightedGraph {
    let n = weights.len();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    WeightedGraph::from_edges(n, &edges, weights).expect("valid cycle")
}

pub fn path(weights: Vec<Weight>) -> WeightedGraph {
    let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
    WeightedGraph::from_edges(weights.len(), &edges, weights).expect("valid path")
}
