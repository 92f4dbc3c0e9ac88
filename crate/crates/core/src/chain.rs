//! Transition and generator matrices associated with a graph.
//!
//! A DTMC uses `P = D⁻¹A` (row-normalized weights) and a CTMC uses
//! `Q = A − D`, for whichever adjacency orientation is requested. Unit
//! weights give the unweighted constructions; arbitrary positive weights
//! give the normalized-weight chain and the weighted generator.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, Graph, Orientation};
use crate::matrix::DenseMatrix;

/// Per-row tolerance for stochastic and generator validation.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Row-stochastic square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    matrix: DenseMatrix,
    doubly_stochastic: bool,
}

impl StochasticMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// True iff every column also sums to one within [`ROW_SUM_TOLERANCE`].
    pub fn is_doubly_stochastic(&self) -> bool {
        self.doubly_stochastic
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }
}

impl Serialize for StochasticMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

/// Square matrix with nonnegative off-diagonal rates and zero row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    matrix: DenseMatrix,
}

impl GeneratorMatrix {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        for i in 0..matrix.rows() {
            let row = matrix.row(i);
            if let Some((j, v)) = row
                .iter()
                .enumerate()
                .find(|&(j, v)| !v.is_finite() || (j != i && *v < 0.0))
            {
                return Err(Error::NotGenerator {
                    row: i,
                    reason: format!("entry ({i}, {j}) is {v}"),
                });
            }
            if row[i] > 0.0 {
                return Err(Error::NotGenerator {
                    row: i,
                    reason: format!("diagonal entry is positive ({})", row[i]),
                });
            }
            let sum: f64 = row.iter().sum();
            if sum.abs() > ROW_SUM_TOLERANCE {
                return Err(Error::NotGenerator {
                    row: i,
                    reason: format!("row sums to {sum}"),
                });
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Largest exit rate `max_i |Q[i][i]|`.
    pub fn max_exit_rate(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.matrix[(i, i)].abs())
            .fold(0.0, f64::max)
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }
}

impl Serialize for GeneratorMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

/// Either kind of chain, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum Chain<'a> {
    Discrete(&'a StochasticMatrix),
    Continuous(&'a GeneratorMatrix),
}

impl Chain<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Chain::Discrete(p) => p.dim(),
            Chain::Continuous(q) => q.dim(),
        }
    }
}

/// Checks a user-supplied matrix (e.g. a channel matrix) for row-stochasticity.
pub fn validate_stochastic(m: DenseMatrix) -> Result<StochasticMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for i in 0..m.rows() {
        let row = m.row(i);
        if let Some((j, v)) = row
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::NotStochastic {
                row: i,
                reason: format!("entry ({i}, {j}) is {v}"),
            });
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::NotStochastic {
                row: i,
                reason: format!("row sums to {sum}"),
            });
        }
    }
    let doubly_stochastic = m
        .column_sums()
        .iter()
        .all(|s| (s - 1.0).abs() <= ROW_SUM_TOLERANCE);
    Ok(StochasticMatrix {
        matrix: m,
        doubly_stochastic,
    })
}

/// `P = D⁻¹A` for the chosen orientation.
///
/// A vertex with zero degree (only possible in a directed graph) has no
/// outgoing mass; it becomes absorbing, `P[i][i] = 1`, so every row stays
/// stochastic.
pub fn dtmc_from_graph(g: &Graph, orientation: Orientation) -> Result<StochasticMatrix> {
    if g.edges().is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let a = adjacency_matrix(g, orientation)?;
    let degrees = a.row_sums();
    let n = g.num_vertices();
    let mut p = DenseMatrix::zeros(n, n);
    for (i, &d) in degrees.iter().enumerate() {
        if d > 0.0 {
            for j in 0..n {
                p[(i, j)] = a[(i, j)] / d;
            }
        } else {
            p[(i, i)] = 1.0;
        }
    }
    validate_stochastic(p)
}

/// `Q = A − D` for the chosen orientation; each diagonal entry is the
/// negated sum of its row's off-diagonal rates.
pub fn ctmc_from_graph(g: &Graph, orientation: Orientation) -> Result<GeneratorMatrix> {
    if g.edges().is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let mut q = adjacency_matrix(g, orientation)?;
    for i in 0..q.rows() {
        let out: f64 = q.row(i).iter().sum();
        q[(i, i)] = -out;
    }
    GeneratorMatrix::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
        m.to_rows()
    }

    #[test]
    fn triangle_dtmc_is_doubly_stochastic() {
        let g = generate(GraphKind::Complete, 3).unwrap();
        let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
        assert!(p.is_doubly_stochastic());
        assert_eq!(
            rows(p.matrix()),
            vec![vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.5, 0.0]]
        );
    }

    #[test]
    fn path_dtmc_is_not_doubly_stochastic() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2)], false).unwrap();
        let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
        assert_eq!(
            rows(p.matrix()),
            vec![vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 1.0, 0.0]]
        );
        assert_eq!(p.matrix().column_sums(), vec![0.5, 2.0, 0.5]);
        assert!(!p.is_doubly_stochastic());
    }

    #[test]
    fn zero_in_degree_becomes_absorbing() {
        let g = Graph::unweighted(3, &[(0, 1), (0, 2)], true).unwrap();
        let p = dtmc_from_graph(&g, Orientation::In).unwrap();
        assert_eq!(
            rows(p.matrix()),
            vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
        let p_out = dtmc_from_graph(&g, Orientation::Out).unwrap();
        assert_eq!(
            rows(p_out.matrix()),
            vec![vec![0.0, 0.5, 0.5], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
        );
    }

    #[test]
    fn weighted_rows_are_normalized() {
        let g = Graph::weighted(3, &[(0, 1, 1.0), (0, 2, 3.0)], false).unwrap();
        let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
        assert_eq!(p.matrix().row(0), &[0.0, 0.25, 0.75]);
    }

    #[test]
    fn ctmc_examples() {
        let path = Graph::unweighted(3, &[(0, 1), (1, 2)], false).unwrap();
        let q = ctmc_from_graph(&path, Orientation::Undirected).unwrap();
        assert_eq!(
            rows(q.matrix()),
            vec![vec![-1.0, 1.0, 0.0], vec![1.0, -2.0, 1.0], vec![0.0, 1.0, -1.0]]
        );
        let edge = Graph::unweighted(2, &[(0, 1)], false).unwrap();
        assert_eq!(
            rows(ctmc_from_graph(&edge, Orientation::Undirected).unwrap().matrix()),
            vec![vec![-1.0, 1.0], vec![1.0, -1.0]]
        );
        let tri = Graph::weighted(3, &[(0, 1, 2.0), (1, 2, 2.0), (0, 2, 2.0)], false).unwrap();
        let q = ctmc_from_graph(&tri, Orientation::Undirected).unwrap();
        assert_eq!(
            rows(q.matrix()),
            vec![vec![-4.0, 2.0, 2.0], vec![2.0, -4.0, 2.0], vec![2.0, 2.0, -4.0]]
        );
        assert_eq!(q.max_exit_rate(), 4.0);
    }

    #[test]
    fn directed_ctmc_both_orientations() {
        let g = Graph::unweighted(3, &[(0, 1), (0, 2)], true).unwrap();
        let q_in = ctmc_from_graph(&g, Orientation::In).unwrap();
        let q_out = ctmc_from_graph(&g, Orientation::Out).unwrap();
        assert_eq!(
            rows(q_in.matrix()),
            vec![vec![0.0, 0.0, 0.0], vec![1.0, -1.0, 0.0], vec![1.0, 0.0, -1.0]]
        );
        assert_eq!(
            rows(q_out.matrix()),
            vec![vec![-2.0, 1.0, 1.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]
        );
        assert!(!q_in.matrix().is_symmetric());
    }

    #[test]
    fn empty_graph_rejected() {
        let g = Graph::unweighted(3, &[], false).unwrap();
        assert_eq!(dtmc_from_graph(&g, Orientation::Undirected), Err(Error::EmptyEdgeSet));
        assert_eq!(ctmc_from_graph(&g, Orientation::Undirected), Err(Error::EmptyEdgeSet));
    }

    #[test]
    fn validate_stochastic_examples() {
        let half = DenseMatrix::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(validate_stochastic(half).unwrap().is_doubly_stochastic());

        let bad = DenseMatrix::from_rows(&[[1.0, 0.0], [0.3, 0.6]]).unwrap();
        match validate_stochastic(bad) {
            Err(Error::NotStochastic { row, reason }) => {
                assert_eq!(row, 1);
                assert!(reason.starts_with("row sums to 0.9") || reason.starts_with("row sums to 0.8999"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }

        let bsc = DenseMatrix::from_rows(&[[0.75, 0.25], [0.25, 0.75]]).unwrap();
        assert!(validate_stochastic(bsc).unwrap().is_doubly_stochastic());

        let neg = DenseMatrix::from_rows(&[[1.5, -0.5], [0.5, 0.5]]).unwrap();
        assert!(matches!(validate_stochastic(neg), Err(Error::NotStochastic { row: 0, .. })));

        let rect = DenseMatrix::from_row_major(1, 2, vec![0.5, 0.5]).unwrap();
        assert!(matches!(validate_stochastic(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn generator_validation() {
        let ok = DenseMatrix::from_rows(&[[-2.0, 2.0], [1.0, -1.0]]).unwrap();
        assert!(GeneratorMatrix::new(ok).is_ok());
        let neg_off = DenseMatrix::from_rows(&[[1.0, -1.0], [1.0, -1.0]]).unwrap();
        assert!(GeneratorMatrix::new(neg_off).is_err());
        let bad_sum = DenseMatrix::from_rows(&[[-1.0, 2.0], [1.0, -1.0]]).unwrap();
        assert!(matches!(GeneratorMatrix::new(bad_sum), Err(Error::NotGenerator { row: 0, .. })));
    }

    #[test]
    fn serializes_like_a_matrix() {
        let g = Graph::unweighted(2, &[(0, 1)], false).unwrap();
        let q = ctmc_from_graph(&g, Orientation::Undirected).unwrap();
        assert_eq!(
            serde_json::to_string(&q).unwrap(),
            r#"{"m":2,"rows":[[-1.0,1.0],[1.0,-1.0]]}"#
        );
    }
}
