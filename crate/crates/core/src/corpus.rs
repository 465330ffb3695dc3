//! Seeded random connected graphs for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder};

/// A connected graph on `n` vertices labeled `v0..`: a random spanning tree
/// plus each remaining pair independently with probability `density`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(&format!("v{i}")).expect("fresh label");
    }
    for v in 1..n {
        let parent = rng.random_range(0..v);
        b.add_edge(parent, v).expect("valid edge");
    }
    for u in 0..n {
        for v in u + 1..n {
            if !b.has_edge(u, v) && rng.random_bool(density) {
                b.add_edge(u, v).expect("valid edge");
            }
        }
    }
    b.build()
}

/// `count` connected graphs with `1..=max_n` vertices and varied density,
/// reproducible from `seed`.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_n);
            let density = rng.random_range(0.0..0.7);
            random_connected(&mut rng, n, density)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graphs_are_connected_and_reproducible() {
        let a = corpus(7, 50, 7);
        let b = corpus(7, 50, 7);
        assert!(a.iter().all(|g| g.is_connected() && g.n() <= 7));
        let text = |c: &[Graph]| c.iter().map(Graph::to_text).collect::<Vec<_>>();
        assert_eq!(text(&a), text(&b));
    }
}
