//! Finite probability mass functions over integer values.

use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Tolerance for "sums to one" checks on pmfs.
pub const PMF_TOL: f64 = 1e-9;

/// A finite pmf over `u32` values, sorted by value, with a cached cdf for
/// sampling. Immutable after construction; (de)serializes as the plain
/// entry list so the cdf is rebuilt and validated on the way in.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(try_from = "Vec<(u32, f64)>", into = "Vec<(u32, f64)>")]
pub struct Pmf {
    entries: Vec<(u32, f64)>,
    cdf: Vec<f64>,
}

impl TryFrom<Vec<(u32, f64)>> for Pmf {
    type Error = ModelError;

    fn try_from(entries: Vec<(u32, f64)>) -> Result<Self, ModelError> {
        Pmf::new(entries)
    }
}

impl From<Pmf> for Vec<(u32, f64)> {
    fn from(pmf: Pmf) -> Self {
        pmf.entries
    }
}

impl Pmf {
    /// Build from (value, probability) pairs; probabilities must be
    /// non-negative and sum to 1 within [`PMF_TOL`].
    pub fn new(mut entries: Vec<(u32, f64)>) -> Result<Self, ModelError> {
        entries.retain(|&(_, p)| p != 0.0);
        entries.sort_by_key(|&(v, _)| v);
        if entries.is_empty() {
            return Err(ModelError::InvalidParameter("empty pmf".into()));
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::InvalidParameter(format!(
                    "duplicate pmf value {}",
                    w[0].0
                )));
            }
        }
        if entries.iter().any(|&(_, p)| !(p >= 0.0) || !p.is_finite()) {
            return Err(ModelError::InvalidParameter(
                "pmf probabilities must be finite and >= 0".into(),
            ));
        }
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > PMF_TOL {
            return Err(ModelError::NotNormalized(total));
        }
        Ok(Self::prepared(entries))
    }

    /// Build from non-negative weights, normalizing to 1.
    pub fn from_weights(entries: Vec<(u32, f64)>) -> Result<Self, ModelError> {
        let total: f64 = entries.iter().map(|&(_, w)| w).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(ModelError::InvalidParameter(format!(
                "pmf weights must have a positive finite total, got {total}"
            )));
        }
        let normalized = entries.into_iter().map(|(v, w)| (v, w / total)).collect();
        Self::new(normalized)
    }

    /// Point mass at a single value.
    pub fn degenerate(value: u32) -> Self {
        Self::prepared(vec![(value, 1.0)])
    }

    fn prepared(entries: Vec<(u32, f64)>) -> Self {
        let mut cdf = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for &(_, p) in &entries {
            acc += p;
            cdf.push(acc);
        }
        Self { entries, cdf }
    }

    pub fn prob(&self, value: u32) -> f64 {
        self.entries
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn contains(&self, value: u32) -> bool {
        self.entries
            .binary_search_by_key(&value, |&(v, _)| v)
            .is_ok()
    }

    pub fn min_value(&self) -> u32 {
        self.entries[0].0
    }

    pub fn max_value(&self) -> u32 {
        self.entries[self.entries.len() - 1].0
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    /// Expectation of `f` under the pmf.
    pub fn expect(&self, f: impl Fn(u32) -> f64) -> f64 {
        self.entries.iter().map(|&(v, p)| p * f(v)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(f64::from)
    }

    /// Inverse-cdf sample.
    pub fn sample(&self, rng: &mut impl Rng) -> u32 {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c < u);
        self.entries[idx.min(self.entries.len() - 1)].0
    }

    /// Size-biased reweighting: p'(v) ∝ f(v)·p(v).
    pub fn reweight(&self, f: impl Fn(u32) -> f64) -> Result<Pmf, ModelError> {
        Pmf::from_weights(self.iter().map(|(v, p)| (v, f(v) * p)).collect())
    }
}
