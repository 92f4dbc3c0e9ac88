//! Shannon entropy and Kullback–Leibler divergence, their evolution along a
//! chain's transient trajectory, and min/max divergence measures between
//! the rows (or columns) of a channel matrix.
//!
//! All quantities are in bits. `0·log 0 = 0`, and a divergence with
//! `p_i > 0, q_i = 0` is `+∞`, carried as `f64::INFINITY` rather than an error.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::analysis::{transient, Horizon};
use crate::chain::{Chain, StochasticMatrix};
use crate::error::{Error, Result};
use crate::pmf::{check_len, ProbabilityVector};

/// Output unit for information quantities. Computation is always in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogBase::Bits => bits,
            LogBase::Nats => bits * std::f64::consts::LN_2,
        }
    }
}

pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_of(p.as_slice())
}

fn entropy_of(p: &[f64]) -> f64 {
    let h: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    // a point mass can round to -0.0
    h.max(0.0)
}

/// `D(p‖q)` in bits, possibly `+∞`.
pub fn kl_divergence(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    check_len(p.len(), q.len())?;
    Ok(kl_of(p.as_slice(), q.as_slice()))
}

fn kl_of(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        d += pi * (pi / qi).log2();
    }
    d.max(0.0)
}

/// Ordered `(index, value)` pairs with strictly increasing index.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    points: Vec<(f64, f64)>,
}

impl Trace {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidTrace(format!(
                "index {} does not follow {}",
                w[1].0, w[0].0
            )));
        }
        if points.iter().any(|(i, _)| !i.is_finite() || *i < 0.0) {
            return Err(Error::InvalidTrace("indices must be finite and nonnegative".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.points.last().copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            points: self.points.iter().map(|&(i, v)| (i, f(v))).collect(),
        }
    }

    /// True if no value drops by more than `tolerance` from one point to the next.
    pub fn is_non_decreasing(&self, tolerance: f64) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1 - tolerance)
    }
}

/// Infinite values serialize as the string `"Infinity"`.
struct JsonNumber(f64);

impl Serialize for JsonNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("Infinity")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// Serializes as `[{"step": .., "value": ..}, ...]`.
impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Point(f64, f64);
        impl Serialize for Point {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut st = s.serialize_struct("Point", 2)?;
                st.serialize_field("step", &self.0)?;
                st.serialize_field("value", &JsonNumber(self.1))?;
                st.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.points.len()))?;
        for &(i, v) in &self.points {
            seq.serialize_element(&Point(i, v))?;
        }
        seq.end()
    }
}

/// `H(π(n))` (or `H(π(t))`) along the transient trajectory.
pub fn entropy_trace(chain: Chain<'_>, pi0: &ProbabilityVector, horizon: &Horizon) -> Result<Trace> {
    let points = transient(chain, pi0, horizon)?
        .into_iter()
        .map(|(i, d)| (i, shannon_entropy(&d)))
        .collect();
    Trace::new(points)
}

/// `g = D(π(0) ‖ π(n))` along the transient trajectory.
pub fn kl_trace(chain: Chain<'_>, pi0: &ProbabilityVector, horizon: &Horizon) -> Result<Trace> {
    let points = transient(chain, pi0, horizon)?
        .into_iter()
        .map(|(i, d)| (i, kl_of(pi0.as_slice(), d.as_slice())))
        .collect();
    Trace::new(points)
}

/// `p̄_i = Σ_j b_ij p_j` for a doubly stochastic `b`; never lowers entropy.
pub fn feinstein_step(b: &StochasticMatrix, p: &ProbabilityVector) -> Result<ProbabilityVector> {
    if !b.is_doubly_stochastic() {
        return Err(Error::NotDoublyStochastic);
    }
    check_len(b.dim(), p.len())?;
    let m = b.matrix();
    let mapped = (0..b.dim())
        .map(|i| m.row(i).iter().zip(p.as_slice()).map(|(bij, pj)| bij * pj).sum())
        .collect();
    ProbabilityVector::from_computed(mapped)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Rows => "rows",
            Axis::Columns => "columns",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rows" => Ok(Axis::Rows),
            "columns" => Ok(Axis::Columns),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

/// Smallest and largest divergence between distinct rows (or columns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMeasures {
    pub m1: f64,
    pub m2: f64,
    pub axis: Axis,
}

impl Serialize for ChannelMeasures {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ChannelMeasures", 3)?;
        st.serialize_field("m1", &JsonNumber(self.m1))?;
        st.serialize_field("m2", &JsonNumber(self.m2))?;
        st.serialize_field("axis", self.axis.name())?;
        st.end()
    }
}

/// Min and max of `D(q_i‖q_j)` over ordered pairs `i ≠ j`.
///
/// Columns are only probability vectors when the matrix is doubly
/// stochastic, so `Axis::Columns` requires that.
pub fn channel_measures(b: &StochasticMatrix, axis: Axis) -> Result<ChannelMeasures> {
    let m = b.dim();
    if m < 2 {
        return Err(Error::ChannelTooSmall(m));
    }
    let vectors: Vec<Vec<f64>> = match axis {
        Axis::Rows => b.matrix().to_rows(),
        Axis::Columns => {
            if !b.is_doubly_stochastic() {
                return Err(Error::NotDoublyStochastic);
            }
            b.matrix().transpose().to_rows()
        }
    };
    let (m1, m2) = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| kl_of(&vectors[i], &vectors[j]))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
    Ok(ChannelMeasures { m1, m2, axis })
}
