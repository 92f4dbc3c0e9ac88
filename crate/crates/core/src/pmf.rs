use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a [`ProbabilityVector`].
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Numerically computed entries down to this value are treated as zero.
pub const NEGATIVE_NOISE: f64 = 1e-12;

/// A nonnegative vector whose entries sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        for (i, &p) in entries.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is {p}, expected a finite nonnegative value"
                )));
            }
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(Self(entries))
    }

    /// Accepts the output of a numerical routine: entries in
    /// `[-NEGATIVE_NOISE, 0)` are flushed to zero before validation.
    pub(crate) fn from_computed(mut entries: Vec<f64>) -> Result<Self> {
        for p in entries.iter_mut() {
            if *p < 0.0 && *p >= -NEGATIVE_NOISE {
                *p = 0.0;
            }
        }
        Self::new(entries)
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        Ok(Self(vec![1.0 / m as f64; m]))
    }

    /// All mass on state `k`.
    pub fn point(m: usize, k: usize) -> Result<Self> {
        if k >= m {
            return Err(Error::InvalidDistribution(format!(
                "point mass at {k} outside {m} states"
            )));
        }
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        Ok(Self(v))
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Ok(Self(weights.iter().map(|w| w / total).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Total-variation distance `½ Σ |p_i − q_i|`.
    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(0.5
            * self
                .0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
