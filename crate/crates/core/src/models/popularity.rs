//! Content popularity models P_p(n): the fraction of contents with exactly
//! n interested nodes.

use crate::error::ModelError;
use crate::pmf::Pmf;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Family tag, kept alongside the materialized pmf for reporting and for
/// family-specific transforms (the Zipf exponent shift of the request law).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PopularityFamily {
    /// pmf(n) ∝ n^{-alpha} on [n_min, n_max].
    Zipf { alpha: f64, n_min: u32, n_max: u32 },
    /// Discrete bounded Pareto with shape alpha: pmf(n) ∝ n^{-(alpha+1)},
    /// the discretization of a density ∝ n^{-alpha-1}.
    BoundedPareto { alpha: f64, n_min: u32, n_max: u32 },
    Degenerate { n: u32 },
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularityModel {
    family: PopularityFamily,
    pmf: Pmf,
}

impl PopularityModel {
    pub fn zipf(alpha: f64, n_min: u32, n_max: u32) -> Result<Self, ModelError> {
        let pmf = power_law_pmf(alpha, n_min, n_max)?;
        Ok(Self {
            family: PopularityFamily::Zipf { alpha, n_min, n_max },
            pmf,
        })
    }

    pub fn bounded_pareto(alpha: f64, n_min: u32, n_max: u32) -> Result<Self, ModelError> {
        if !(alpha > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "bounded Pareto shape must be > 0, got {alpha}"
            )));
        }
        let pmf = power_law_pmf(alpha + 1.0, n_min, n_max)?;
        Ok(Self {
            family: PopularityFamily::BoundedPareto { alpha, n_min, n_max },
            pmf,
        })
    }

    pub fn degenerate(n: u32) -> Result<Self, ModelError> {
        if n < 1 {
            return Err(ModelError::InvalidParameter(
                "popularity must be >= 1".into(),
            ));
        }
        Ok(Self {
            family: PopularityFamily::Degenerate { n },
            pmf: Pmf::degenerate(n),
        })
    }

    pub fn explicit(entries: BTreeMap<u32, f64>) -> Result<Self, ModelError> {
        let pmf = Pmf::new(entries.into_iter().collect())?;
        if pmf.min_value() < 1 {
            return Err(ModelError::InvalidParameter(
                "popularity support must be >= 1".into(),
            ));
        }
        Ok(Self {
            family: PopularityFamily::Explicit,
            pmf,
        })
    }

    pub fn family(&self) -> &PopularityFamily {
        &self.family
    }

    pub fn pmf(&self) -> &Pmf {
        &self.pmf
    }

    /// P_p(n); zero outside the support.
    pub fn prob(&self, n: u32) -> f64 {
        self.pmf.prob(n)
    }

    /// E_p[n] — the average content popularity.
    pub fn mean(&self) -> f64 {
        self.pmf.mean()
    }

    /// E_p[f(n)].
    pub fn expect(&self, f: impl Fn(u32) -> f64) -> f64 {
        self.pmf.expect(f)
    }

    pub fn max_n(&self) -> u32 {
        self.pmf.max_value()
    }

    pub fn min_n(&self) -> u32 {
        self.pmf.min_value()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.pmf.contains(n)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u32 {
        self.pmf.sample(rng)
    }
}

fn power_law_pmf(exponent: f64, n_min: u32, n_max: u32) -> Result<Pmf, ModelError> {
    if n_min < 1 || n_max < n_min {
        return Err(ModelError::InvalidParameter(format!(
            "power-law support requires 1 <= n_min <= n_max, got [{n_min}, {n_max}]"
        )));
    }
    let weights = (n_min..=n_max)
        .map(|n| (n, f64::from(n).powf(-exponent)))
        .collect();
    Pmf::from_weights(weights)
}

/// P_p(n) for a given popularity value; zero outside the support.
pub fn popularity_pmf(model: &PopularityModel, n: u32) -> f64 {
    model.prob(n)
}
