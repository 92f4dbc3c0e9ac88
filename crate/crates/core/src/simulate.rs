//! Monte Carlo random walks, used as an independent check on the analytic
//! transient distributions.
//!
//! Path `i` draws from its own ChaCha stream (`stream = i`) of a generator
//! seeded with the caller's seed, so the estimate depends only on
//! `(seed, n_paths)` and never on how rayon splits the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::pmf::{check_len, ProbabilityVector};

const CHUNK: usize = 1 << 14;

/// How far to run each sampled path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkLength {
    /// Number of DTMC transitions.
    Steps(usize),
    /// Elapsed CTMC time.
    Time(f64),
}

/// Inverse-CDF sampler over a fixed categorical distribution.
#[derive(Debug, Clone)]
struct Categorical {
    cumulative: Vec<f64>,
}

impl Categorical {
    fn new(weights: impl IntoIterator<Item = f64>) -> Self {
        let mut acc = 0.0;
        let cumulative = weights
            .into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { cumulative }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty categorical");
        let x = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= x);
        idx.min(self.cumulative.len() - 1)
    }
}

enum Dynamics {
    Discrete {
        rows: Vec<Categorical>,
        steps: usize,
    },
    Continuous {
        exit_rates: Vec<f64>,
        jumps: Vec<Categorical>,
        horizon: f64,
    },
}

impl Dynamics {
    fn run<R: Rng>(&self, mut state: usize, rng: &mut R) -> usize {
        match self {
            Dynamics::Discrete { rows, steps } => {
                for _ in 0..*steps {
                    state = rows[state].sample(rng);
                }
                state
            }
            Dynamics::Continuous {
                exit_rates,
                jumps,
                horizon,
            } => {
                let mut clock = 0.0;
                loop {
                    let rate = exit_rates[state];
                    if rate <= 0.0 {
                        return state;
                    }
                    // 1 - U lies in (0, 1], so the log is finite
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    clock += -u.ln() / rate;
                    if clock > *horizon {
                        return state;
                    }
                    state = jumps[state].sample(rng);
                }
            }
        }
    }
}

/// Empirical distribution of the state at `length` over `n_paths` sampled
/// trajectories started from `pi0`. Deterministic for a fixed seed.
pub fn simulate_walk(
    chain: Chain<'_>,
    pi0: &ProbabilityVector,
    length: WalkLength,
    n_paths: usize,
    seed: u64,
) -> Result<ProbabilityVector> {
    check_len(chain.dim(), pi0.len())?;
    if n_paths == 0 {
        return Err(Error::InvalidDistribution("n_paths must be positive".into()));
    }
    let dynamics = match (chain, length) {
        (Chain::Discrete(p), WalkLength::Steps(steps)) => Dynamics::Discrete {
            rows: (0..p.dim())
                .map(|i| Categorical::new(p.matrix().row(i).iter().copied()))
                .collect(),
            steps,
        },
        (Chain::Continuous(q), WalkLength::Time(horizon)) => {
            if !horizon.is_finite() || horizon < 0.0 {
                return Err(Error::InvalidTime(format!("horizon {horizon} is invalid")));
            }
            let m = q.matrix();
            let exit_rates: Vec<f64> = (0..q.dim()).map(|i| -m[(i, i)]).collect();
            let jumps = (0..q.dim())
                .map(|i| {
                    let rate = exit_rates[i];
                    if rate > 0.0 {
                        Categorical::new(
                            m.row(i)
                                .iter()
                                .enumerate()
                                .map(|(j, &v)| if j == i { 0.0 } else { v / rate }),
                        )
                    } else {
                        Categorical::new(std::iter::empty())
                    }
                })
                .collect();
            Dynamics::Continuous {
                exit_rates,
                jumps,
                horizon,
            }
        }
        (Chain::Discrete(_), WalkLength::Time(_)) => {
            return Err(Error::InvalidTime("a DTMC needs a step count".into()))
        }
        (Chain::Continuous(_), WalkLength::Steps(_)) => {
            return Err(Error::InvalidTime("a CTMC needs a time horizon".into()))
        }
    };
    let initial = Categorical::new(pi0.as_slice().iter().copied());
    let base = ChaCha8Rng::seed_from_u64(seed);
    let m = chain.dim();

    let n_chunks = n_paths.div_ceil(CHUNK);
    let counts = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; m];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n_paths);
            for path in start..end {
                let mut rng = base.clone();
                rng.set_stream(path as u64);
                let s0 = initial.sample(&mut rng);
                counts[dynamics.run(s0, &mut rng)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = n_paths as f64;
    ProbabilityVector::from_computed(counts.into_iter().map(|c| c as f64 / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ctmc_from_graph, dtmc_from_graph, validate_stochastic};
    use crate::graph::{generate, GraphKind, Orientation};
    use crate::matrix::DenseMatrix;

    #[test]
    fn triangle_two_steps() {
        let p = dtmc_from_graph(&generate(GraphKind::Complete, 3).unwrap(), Orientation::Undirected).unwrap();
        let pi0 = ProbabilityVector::point(3, 0).unwrap();
        let est = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(2), 200_000, 7).unwrap();
        let exact = ProbabilityVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert!(est.total_variation(&exact).unwrap() < 0.005);
    }

    #[test]
    fn zero_horizon_samples_initial() {
        let p = dtmc_from_graph(&generate(GraphKind::Ring, 4).unwrap(), Orientation::Undirected).unwrap();
        let pi0 = ProbabilityVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let est = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(0), 200_000, 1).unwrap();
        assert!(est.total_variation(&pi0).unwrap() < 0.005);
    }

    #[test]
    fn absorbing_identity_keeps_initial() {
        let id = validate_stochastic(DenseMatrix::identity(3)).unwrap();
        let pi0 = ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let est = simulate_walk(Chain::Discrete(&id), &pi0, WalkLength::Steps(9), 100_000, 3).unwrap();
        assert!(est.total_variation(&pi0).unwrap() < 0.005);
    }

    #[test]
    fn two_state_ctmc() {
        let q = ctmc_from_graph(
            &crate::graph::Graph::unweighted(2, &[(0, 1)], false).unwrap(),
            Orientation::Undirected,
        )
        .unwrap();
        let pi0 = ProbabilityVector::point(2, 0).unwrap();
        let est = simulate_walk(Chain::Continuous(&q), &pi0, WalkLength::Time(1.0), 200_000, 11).unwrap();
        let decay = (-2.0f64).exp();
        let exact = ProbabilityVector::new(vec![(1.0 + decay) / 2.0, (1.0 - decay) / 2.0]).unwrap();
        assert!(est.total_variation(&exact).unwrap() < 0.005);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = dtmc_from_graph(&generate(GraphKind::Star, 5).unwrap(), Orientation::Undirected).unwrap();
        let pi0 = ProbabilityVector::uniform(5).unwrap();
        let a = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(3), 50_000, 42).unwrap();
        let b = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(3), 50_000, 42).unwrap();
        let c = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(3), 50_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn horizon_kind_must_match_chain() {
        let p = validate_stochastic(DenseMatrix::identity(2)).unwrap();
        let pi0 = ProbabilityVector::uniform(2).unwrap();
        assert!(simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Time(1.0), 10, 0).is_err());
        assert!(simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(1), 0, 0).is_err());
    }
}
