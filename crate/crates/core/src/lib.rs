//! # graphchain
//!
//! Discrete- and continuous-time Markov chains associated with graphs.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | graphs, edge-list parsing, adjacency / degree / Laplacian matrices, degree PMF, generators |
//! | [`chain`] | `P = D⁻¹A` and `Q = A − D` for any orientation, stochastic/generator validation |
//! | [`analysis`] | transient distributions (iteration, uniformization), stationary vectors |
//! | [`simulate`] | seeded Monte Carlo random walks |
//! | [`info`] | entropy, KL divergence, entropy and divergence traces, channel measures |
//! | [`structured`] | degree-entropy classification, fast transient for regular graphs |
//!
//! ```
//! use graphchain::{analysis, chain, graph};
//! use graphchain::graph::{GraphKind, Orientation};
//!
//! let ring = graph::generate(GraphKind::Ring, 5).unwrap();
//! let p = chain::dtmc_from_graph(&ring, Orientation::Undirected).unwrap();
//! assert!(p.is_doubly_stochastic());
//! let eq = analysis::dtmc_equilibrium(&p).unwrap();
//! assert!(eq.as_slice().iter().all(|x| (x - 0.2).abs() < 1e-12));
//! ```

pub mod analysis;
pub mod chain;
pub mod error;
pub mod graph;
pub mod info;
pub mod matrix;
pub mod pmf;
pub mod sampling;
pub mod simulate;
pub mod structured;

pub use chain::{Chain, GeneratorMatrix, StochasticMatrix};
pub use error::{Error, Result};
pub use graph::{Graph, GraphKind, Orientation};
pub use matrix::DenseMatrix;
pub use pmf::ProbabilityVector;
