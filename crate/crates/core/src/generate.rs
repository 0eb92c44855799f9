//! Seeded instance generators. The same `(family, n, density, seed)` always
//! yields the same graph.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::oracle::vertex_pairs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("family needs n >= 3, got {0}")]
    TooFewVertices(usize),
    #[error("no 2-vertex-connected sample found after {tries} tries")]
    GenerationFailed { tries: u32 },
}

pub const DEFAULT_REJECTION_TRIES: u32 = 200;

/// The cycle `C_n`, edges `(i, i+1 mod n)` in order.
pub fn cycle_graph(n: usize) -> Result<Graph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::TooFewVertices(n));
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::build(n, &pairs).expect("cycle is simple"))
}

/// Hamiltonian cycle plus chords sampled independently with probability
/// `density`. Always 2-edge-connected (and 2-vertex-connected).
pub fn ham_plus_chords(n: usize, density: f64, seed: u64) -> Result<Graph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::TooFewVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for (u, v) in vertex_pairs(n) {
        let on_cycle = v == u + 1 || (u == 0 && v == n - 1);
        if !on_cycle && rng.gen_bool(density.clamp(0.0, 1.0)) {
            pairs.push((u, v));
        }
    }
    Ok(Graph::build(n, &pairs).expect("cycle plus chords is simple"))
}

/// Erdos-Renyi samples rejected until 2-vertex-connected.
pub fn random_two_vertex_connected(
    n: usize,
    density: f64,
    seed: u64,
    max_tries: u32,
) -> Result<Graph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::TooFewVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let mut pairs = Vec::new();
        for (u, v) in vertex_pairs(n) {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                pairs.push((u, v));
            }
        }
        let g = Graph::build(n, &pairs).expect("sampled pairs are simple");
        if g.is_two_vertex_connected() {
            return Ok(g);
        }
    }
    Err(GenerateError::GenerationFailed { tries: max_tries })
}
