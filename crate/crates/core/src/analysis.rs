//! Equilibrium and transient distributions.
//!
//! Discrete chains propagate by repeated row-vector products `π(n+1) = π(n)·P`.
//! Continuous chains use uniformization:
//!
//! ```text
//! Λ   = max_i |Q[i][i]|
//! P_u = I + Q/Λ
//! π(t) = Σ_k  e^{−Λt} (Λt)^k / k!  ·  π(0)·P_u^k
//! ```
//!
//! truncated once the remaining Poisson mass drops below [`POISSON_TAIL`].
//! Every term is a nonnegative combination of probability vectors, so there
//! is no cancellation. Stationary vectors come from a direct linear solve,
//! which also handles periodic chains.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::chain::{Chain, GeneratorMatrix, StochasticMatrix};
use crate::error::{Error, Result};
use crate::matrix::{solve, DenseMatrix};
use crate::pmf::{check_len, ProbabilityVector};

/// Poisson tail mass at which the uniformization series is truncated.
pub const POISSON_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransientResultDtmc {
    pub steps: Vec<usize>,
    pub distributions: Vec<ProbabilityVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransientResultCtmc {
    pub times: Vec<f64>,
    pub distributions: Vec<ProbabilityVector>,
}

/// Time axis for a transient computation.
#[derive(Debug, Clone, PartialEq)]
pub enum Horizon {
    /// DTMC steps `0..=n`.
    Steps(usize),
    /// CTMC evaluation times, ascending.
    Times(Vec<f64>),
}

/// Transient distributions of either chain kind, paired with their time
/// index (step number or time).
pub fn transient(
    chain: Chain<'_>,
    pi0: &ProbabilityVector,
    horizon: &Horizon,
) -> Result<Vec<(f64, ProbabilityVector)>> {
    match (chain, horizon) {
        (Chain::Discrete(p), Horizon::Steps(n)) => {
            let r = dtmc_transient(p, pi0, *n)?;
            Ok(r.steps.into_iter().map(|k| k as f64).zip(r.distributions).collect())
        }
        (Chain::Continuous(q), Horizon::Times(times)) => {
            let r = ctmc_transient(q, pi0, times)?;
            Ok(r.times.into_iter().zip(r.distributions).collect())
        }
        (Chain::Discrete(_), Horizon::Times(_)) => {
            Err(Error::InvalidTime("a DTMC needs a step count".into()))
        }
        (Chain::Continuous(_), Horizon::Steps(_)) => {
            Err(Error::InvalidTime("a CTMC needs a time grid".into()))
        }
    }
}

/// `π(k) = π(0)·P^k` for `k = 0..=n_max`, one vector–matrix product per step.
pub fn dtmc_transient(
    p: &StochasticMatrix,
    pi0: &ProbabilityVector,
    n_max: usize,
) -> Result<TransientResultDtmc> {
    check_len(p.dim(), pi0.len())?;
    let mut distributions = Vec::with_capacity(n_max + 1);
    distributions.push(pi0.clone());
    let mut current = pi0.as_slice().to_vec();
    let mut next = vec![0.0; current.len()];
    for _ in 0..n_max {
        p.matrix().left_mul_into(&current, &mut next);
        std::mem::swap(&mut current, &mut next);
        distributions.push(ProbabilityVector::from_computed(current.clone())?);
    }
    Ok(TransientResultDtmc {
        steps: (0..=n_max).collect(),
        distributions,
    })
}

/// `π(t) = π(0)·e^{Qt}` at each requested time, by uniformization.
pub fn ctmc_transient(
    q: &GeneratorMatrix,
    pi0: &ProbabilityVector,
    times: &[f64],
) -> Result<TransientResultCtmc> {
    check_len(q.dim(), pi0.len())?;
    check_times(times)?;
    let rows = uniformized_apply(q, pi0.as_slice(), times);
    let distributions = rows
        .into_iter()
        .map(ProbabilityVector::from_computed)
        .collect::<Result<Vec<_>>>()?;
    Ok(TransientResultCtmc {
        times: times.to_vec(),
        distributions,
    })
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidTime(format!("time {t} is negative or not finite")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidTime("times must be sorted ascending".into()));
    }
    Ok(())
}

/// Applies `e^{Qt}` to an arbitrary row vector for each `t`.
///
/// The powers `x·P_u^k` are computed once and shared across all times.
fn uniformized_apply(q: &GeneratorMatrix, x: &[f64], times: &[f64]) -> Vec<Vec<f64>> {
    let rate = q.max_exit_rate();
    if rate == 0.0 {
        return times.iter().map(|_| x.to_vec()).collect();
    }
    let n = q.dim();
    let mut pu = q.matrix().scale(1.0 / rate);
    for i in 0..n {
        pu[(i, i)] += 1.0;
    }

    let mut powers: Vec<Vec<f64>> = vec![x.to_vec()];
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let lt = rate * t;
        if lt == 0.0 {
            out.push(x.to_vec());
            continue;
        }
        let log_lt = lt.ln();
        // cap guards against rounding in the cumulative sum for very large Λt
        let cap = (lt + 12.0 * lt.sqrt() + 64.0).ceil() as usize;
        let mut log_w = -lt;
        let mut cumulative = 0.0;
        let mut acc = vec![0.0; n];
        let mut k = 0usize;
        loop {
            if k == powers.len() {
                let mut next = vec![0.0; n];
                pu.left_mul_into(&powers[k - 1], &mut next);
                powers.push(next);
            }
            let w = log_w.exp();
            if w > 0.0 {
                for (a, v) in acc.iter_mut().zip(&powers[k]) {
                    *a += w * v;
                }
            }
            cumulative += w;
            if 1.0 - cumulative < POISSON_TAIL || k >= cap {
                break;
            }
            k += 1;
            log_w += log_lt - (k as f64).ln();
        }
        out.push(acc);
    }
    out
}

/// `e^{Qt}` as a dense matrix, row `i` being `e_i·e^{Qt}` via uniformization.
pub fn expm_uniformized(q: &GeneratorMatrix, t: f64) -> Result<DenseMatrix> {
    check_times(&[t])?;
    let n = q.dim();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push(uniformized_apply(q, &e, &[t]).pop().expect("one time"));
    }
    DenseMatrix::from_rows(&rows)
}

/// `e^{Qt}` from the symmetric eigendecomposition `Q = V Λ Vᵀ`.
///
/// Only defined for symmetric generators (undirected graphs). Used as an
/// independent cross-check of [`expm_uniformized`].
pub fn expm_symmetric(q: &GeneratorMatrix, t: f64) -> Result<DenseMatrix> {
    check_times(&[t])?;
    let m = q.matrix();
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let dm = DMatrix::from_row_slice(n, n, m.as_slice());
    let eig = SymmetricEigen::new(dm);
    let scaled = eig.eigenvalues.map(|l| (l * t).exp());
    let v = &eig.eigenvectors;
    let e = v * DMatrix::from_diagonal(&scaled) * v.transpose();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = e[(i, j)];
        }
    }
    Ok(out)
}

/// Strong connectivity of the directed support graph (positive off-diagonal
/// entries) of a square matrix.
pub fn is_irreducible(m: &DenseMatrix) -> bool {
    let n = m.rows();
    if n <= 1 {
        return true;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let w = if forward { m[(x, y)] } else { m[(y, x)] };
                if y != x && w > 0.0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Period of an irreducible nonnegative matrix (gcd of cycle lengths in its
/// support graph, self-loops included). `None` for reducible input.
pub fn period(m: &DenseMatrix) -> Option<usize> {
    if !is_irreducible(m) {
        return None;
    }
    let n = m.rows();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if m[(x, y)] > 0.0 && level[y] == usize::MAX {
                level[y] = level[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut g = 0usize;
    for x in 0..n {
        for y in 0..n {
            if m[(x, y)] > 0.0 {
                let diff = (level[x] + 1).abs_diff(level[y]);
                g = gcd(g, diff);
            }
        }
    }
    // n == 1 with no self-loop has no cycles; treat as aperiodic
    Some(g.max(1))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Unique `π` with `π·P = π`, `Σπ = 1`.
pub fn dtmc_equilibrium(p: &StochasticMatrix) -> Result<ProbabilityVector> {
    if !is_irreducible(p.matrix()) {
        return Err(Error::Reducible);
    }
    let n = p.dim();
    let mut a = p.matrix().transpose();
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    stationary_solve(a)
}

/// Unique `π` with `π·Q = 0`, `Σπ = 1`.
pub fn ctmc_equilibrium(q: &GeneratorMatrix) -> Result<ProbabilityVector> {
    if !is_irreducible(q.matrix()) {
        return Err(Error::Reducible);
    }
    stationary_solve(q.matrix().transpose())
}

/// Solves `a·πᵀ = 0` with the last (redundant) equation replaced by `Σπ = 1`.
fn stationary_solve(mut a: DenseMatrix) -> Result<ProbabilityVector> {
    let n = a.rows();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    ProbabilityVector::from_computed(solve(a, b)?)
}
