//! Degree-distribution entropy of a graph and the structures at its extremes.
//!
//! Graph entropy is the Shannon entropy of the vertex-degree PMF. It reaches
//! `log₂ M` exactly when every vertex has the same degree `c`; then `D = cI`,
//! `P = A/c`, and the walk can be propagated with the integer adjacency
//! matrix alone. The star (one hub joined to every other vertex, nothing
//! else) sits at the other end.

use serde::Serialize;

use crate::analysis::TransientResultDtmc;
use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, degree_pmf, Graph, Orientation};
use crate::info::shannon_entropy;
use crate::pmf::{check_len, ProbabilityVector};

/// Largest `n` for which `π(0)·Aⁿ` is accumulated unscaled and divided by `cⁿ` once.
pub const SINGLE_SCALE_MAX_STEPS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropicClassification {
    pub graph_entropy_bits: f64,
    pub is_max_entropic: bool,
    pub regularity_degree: Option<u32>,
    pub is_min_entropic_star: bool,
}

fn unit_degrees(g: &Graph) -> Result<Vec<u32>> {
    let skeleton = g.unit_weight_skeleton();
    Ok(skeleton
        .degrees(Orientation::Undirected)?
        .into_iter()
        .map(|d| d as u32)
        .collect())
}

/// Classifies an undirected graph by its (unit-weight) degree distribution.
pub fn classify(g: &Graph) -> Result<EntropicClassification> {
    if g.is_directed() {
        return Err(Error::OrientationMismatch {
            orientation: "undirected",
            kind: "directed",
        });
    }
    if g.edges().is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let m = g.num_vertices();
    let degrees = unit_degrees(g)?;
    let pmf = degree_pmf(&g.unit_weight_skeleton(), Orientation::Undirected)?;
    let regular = degrees.windows(2).all(|w| w[0] == w[1]);
    let is_star = g.edges().len() == m - 1 && degrees.iter().any(|&d| d as usize == m - 1);
    Ok(EntropicClassification {
        graph_entropy_bits: shannon_entropy(&pmf),
        is_max_entropic: regular,
        regularity_degree: regular.then_some(degrees[0]),
        is_min_entropic_star: is_star,
    })
}

/// `π(n) = π(0)·Aⁿ / cⁿ` for a `c`-regular unit-weight undirected graph.
pub fn regular_fast_transient(
    g: &Graph,
    pi0: &ProbabilityVector,
    n: usize,
) -> Result<ProbabilityVector> {
    if g.is_directed() {
        return Err(Error::NotRegular("graph is directed".into()));
    }
    if !g.has_unit_weights() {
        return Err(Error::NotRegular("graph has non-unit weights".into()));
    }
    if g.edges().is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    check_len(g.num_vertices(), pi0.len())?;
    let degrees = unit_degrees(g)?;
    if let Some(w) = degrees.windows(2).find(|w| w[0] != w[1]) {
        return Err(Error::NotRegular(format!("degrees {} and {} differ", w[0], w[1])));
    }
    let c = f64::from(degrees[0]);
    let a = adjacency_matrix(g, Orientation::Undirected)?;

    let mut v = pi0.as_slice().to_vec();
    let mut next = vec![0.0; v.len()];
    let per_step = n > SINGLE_SCALE_MAX_STEPS;
    for _ in 0..n {
        a.left_mul_into(&v, &mut next);
        std::mem::swap(&mut v, &mut next);
        if per_step {
            v.iter_mut().for_each(|x| *x /= c);
        }
    }
    if !per_step {
        let scale = c.powi(n as i32);
        v.iter_mut().for_each(|x| *x /= scale);
    }
    ProbabilityVector::from_computed(v)
}

/// All steps `0..=n_max` of the fast form, shaped like a DTMC transient result.
pub fn regular_fast_trajectory(
    g: &Graph,
    pi0: &ProbabilityVector,
    n_max: usize,
) -> Result<TransientResultDtmc> {
    let distributions = (0..=n_max)
        .map(|n| regular_fast_transient(g, pi0, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransientResultDtmc {
        steps: (0..=n_max).collect(),
        distributions,
    })
}
