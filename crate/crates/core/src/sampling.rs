//! Random test inputs: distributions, graphs, and doubly stochastic matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::{validate_stochastic, StochasticMatrix};
use crate::error::Result;
use crate::graph::{Edge, Graph};
use crate::matrix::DenseMatrix;
use crate::pmf::ProbabilityVector;

/// Uniform point on the simplex (normalized exponentials).
pub fn random_pmf<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ProbabilityVector {
    let w: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    ProbabilityVector::from_weights(&w).expect("exponential weights are positive")
}

pub fn random_permutation<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    p
}

/// Convex combination of `k` random permutation matrices with random
/// positive weights. Always doubly stochastic (Birkhoff–von Neumann).
pub fn permutation_mixture<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Result<StochasticMatrix> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut b = DenseMatrix::zeros(m, m);
    for w in raw {
        let perm = random_permutation(m, rng);
        for (i, &j) in perm.iter().enumerate() {
            b[(i, j)] += w / total;
        }
    }
    validate_stochastic(b)
}

/// Erdős–Rényi style graph with edge probability `density`; when `weighted`
/// each edge gets a weight in `[0.5, 3)`. Retries until at least one edge exists.
pub fn random_graph<R: Rng + ?Sized>(
    m: usize,
    density: f64,
    directed: bool,
    weighted: bool,
    rng: &mut R,
) -> Graph {
    assert!(m >= 2, "need two vertices for an edge");
    loop {
        let mut edges = Vec::new();
        for u in 0..m {
            for v in 0..m {
                if u == v || (!directed && v < u) {
                    continue;
                }
                if rng.gen::<f64>() < density {
                    let weight = if weighted { rng.gen_range(0.5..3.0) } else { 1.0 };
                    edges.push(Edge { u, v, weight });
                }
            }
        }
        if !edges.is_empty() {
            return Graph::new(m, edges, directed).expect("sampled graphs are simple");
        }
    }
}
