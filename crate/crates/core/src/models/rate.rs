//! Contact-rate models.
//!
//! `RateDist` is a family of positive distributions used both for the
//! pairwise contact rates λ_ij (exponential inter-contact times) and for the
//! pairwise shape parameters α_ij (Pareto inter-contact times, where the
//! mean rate of a pair is α_ij / t0).

use crate::error::ModelError;
use crate::rng::derive_rng;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

/// Distribution family for a positive pairwise quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RateDist {
    /// Gamma with the given mean and coefficient of variation.
    Gamma { mean: f64, cv: f64 },
    /// Classical Pareto (support [scale, ∞), density ∝ x^{-shape-1}).
    Pareto { shape: f64, scale: f64 },
    Uniform { min: f64, max: f64 },
    Constant { value: f64 },
    /// A finite multiset of observed values; sampling is resampling with
    /// replacement, moments are sample moments.
    Empirical { values: Vec<f64> },
}

impl RateDist {
    /// Pareto distribution matching a requested mean and coefficient of
    /// variation (both must be representable: cv > 0 forces shape > 2).
    pub fn pareto_from_mean_cv(mean: f64, cv: f64) -> Result<Self, ModelError> {
        if !(mean > 0.0) || !(cv > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "Pareto mean and cv must be > 0, got mean={mean}, cv={cv}"
            )));
        }
        // cv^2 = 1/(s(s-2))  =>  s = 1 + sqrt(1 + 1/cv^2)
        let shape = 1.0 + (1.0 + 1.0 / (cv * cv)).sqrt();
        let scale = mean * (shape - 1.0) / shape;
        Ok(RateDist::Pareto { shape, scale })
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidParameter(msg));
        match self {
            RateDist::Gamma { mean, cv } => {
                if !(*mean > 0.0) {
                    return bad(format!("Gamma mean must be > 0, got {mean}"));
                }
                if !(*cv >= 0.0) {
                    return bad(format!("Gamma cv must be >= 0, got {cv}"));
                }
            }
            RateDist::Pareto { shape, scale } => {
                if !(*scale > 0.0) {
                    return bad(format!("Pareto scale must be > 0, got {scale}"));
                }
                if !(*shape > 1.0) {
                    return Err(ModelError::InfiniteMoment(format!(
                        "Pareto mean is infinite for shape {shape} <= 1"
                    )));
                }
            }
            RateDist::Uniform { min, max } => {
                if !(*min > 0.0) || !(*max >= *min) {
                    return bad(format!("Uniform requires 0 < min <= max, got [{min}, {max}]"));
                }
            }
            RateDist::Constant { value } => {
                if !(*value > 0.0) {
                    return bad(format!("Constant rate must be > 0, got {value}"));
                }
            }
            RateDist::Empirical { values } => {
                if values.is_empty() {
                    return bad("Empirical rate model needs at least one value".into());
                }
                if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                    return bad("Empirical rates must be finite and > 0".into());
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            RateDist::Gamma { mean, .. } => *mean,
            RateDist::Pareto { shape, scale } => shape * scale / (shape - 1.0),
            RateDist::Uniform { min, max } => 0.5 * (min + max),
            RateDist::Constant { value } => *value,
            RateDist::Empirical { values } => {
                values.iter().sum::<f64>() / values.len() as f64
            }
        }
    }

    /// Population variance; `InfiniteMoment` for Pareto with shape <= 2.
    pub fn variance(&self) -> Result<f64, ModelError> {
        match self {
            RateDist::Gamma { mean, cv } => Ok((mean * cv).powi(2)),
            RateDist::Pareto { shape, scale } => {
                if *shape <= 2.0 {
                    Err(ModelError::InfiniteMoment(format!(
                        "Pareto variance is infinite for shape {shape} <= 2"
                    )))
                } else {
                    Ok(shape * scale * scale / ((shape - 1.0).powi(2) * (shape - 2.0)))
                }
            }
            RateDist::Uniform { min, max } => Ok((max - min).powi(2) / 12.0),
            RateDist::Constant { .. } => Ok(0.0),
            RateDist::Empirical { values } => {
                let m = self.mean();
                Ok(values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64)
            }
        }
    }

    pub fn cv(&self) -> Result<f64, ModelError> {
        Ok(self.variance()?.sqrt() / self.mean())
    }

    /// Build a reusable sampler. Draws are strictly positive.
    pub fn sampler(&self) -> RateSampler {
        match self {
            RateDist::Gamma { mean, cv } => {
                if *cv == 0.0 {
                    RateSampler::Constant(*mean)
                } else {
                    let shape = 1.0 / (cv * cv);
                    let scale = mean * cv * cv;
                    RateSampler::Gamma(rand_distr::Gamma::new(shape, scale).expect("validated"))
                }
            }
            RateDist::Pareto { shape, scale } => RateSampler::Pareto {
                shape: *shape,
                scale: *scale,
            },
            RateDist::Uniform { min, max } => {
                if min == max {
                    RateSampler::Constant(*min)
                } else {
                    RateSampler::Uniform(
                        rand_distr::Uniform::new(*min, *max).expect("validated"),
                    )
                }
            }
            RateDist::Constant { value } => RateSampler::Constant(*value),
            RateDist::Empirical { values } => RateSampler::Empirical(values.clone()),
        }
    }
}

/// Reusable sampler for a [`RateDist`].
#[derive(Debug, Clone)]
pub enum RateSampler {
    Gamma(rand_distr::Gamma<f64>),
    Pareto { shape: f64, scale: f64 },
    Uniform(rand_distr::Uniform<f64>),
    Constant(f64),
    Empirical(Vec<f64>),
}

impl RateSampler {
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match self {
            RateSampler::Gamma(g) => {
                // The Gamma sampler can return exactly 0.0 for tiny shapes;
                // rates must stay strictly positive.
                loop {
                    let x = g.sample(rng);
                    if x > 0.0 {
                        return x;
                    }
                }
            }
            RateSampler::Pareto { shape, scale } => {
                let u: f64 = rng.random();
                scale * (1.0 - u).powf(-1.0 / shape)
            }
            RateSampler::Uniform(u) => u.sample(rng),
            RateSampler::Constant(v) => *v,
            RateSampler::Empirical(values) => values[rng.random_range(0..values.len())],
        }
    }
}

/// Contact-process law implied by a rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ContactLaw {
    /// Exponential inter-contact times with rate λ_ij.
    Exponential,
    /// Pareto inter-contact times: residuals have CCDF (t0/(t0+t))^{α_ij}.
    ParetoRenewal { t0: f64 },
}

/// Specification of the pairwise contact process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RateModel {
    /// Exponential inter-contact times; `dist` is f_λ.
    Rates { dist: RateDist },
    /// Pareto inter-contact times; `shapes` is f_α over the pairwise shape
    /// parameters, with a common scale t0 (the rate of a pair is α/t0).
    ParetoShape { shapes: RateDist, t0: f64 },
}

impl RateModel {
    pub fn exponential(dist: RateDist) -> Self {
        RateModel::Rates { dist }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            RateModel::Rates { dist } => dist.validate(),
            RateModel::ParetoShape { shapes, t0 } => {
                if !(*t0 > 0.0) {
                    return Err(ModelError::InvalidParameter(format!(
                        "Pareto scale t0 must be > 0, got {t0}"
                    )));
                }
                shapes.validate()
            }
        }
    }

    /// The distribution of the pairwise weight (λ_ij or α_ij).
    pub fn pair_weight_dist(&self) -> &RateDist {
        match self {
            RateModel::Rates { dist } => dist,
            RateModel::ParetoShape { shapes, .. } => shapes,
        }
    }

    pub fn contact_law(&self) -> ContactLaw {
        match self {
            RateModel::Rates { .. } => ContactLaw::Exponential,
            RateModel::ParetoShape { t0, .. } => ContactLaw::ParetoRenewal { t0: *t0 },
        }
    }

    /// Mean contact rate μ_λ (α has rate α/t0 under the Pareto law).
    pub fn mean_rate(&self) -> f64 {
        match self {
            RateModel::Rates { dist } => dist.mean(),
            RateModel::ParetoShape { shapes, t0 } => shapes.mean() / t0,
        }
    }

    pub fn rate_cv(&self) -> Result<f64, ModelError> {
        self.pair_weight_dist().cv()
    }
}

/// Mean and coefficient of variation of the contact rates.
pub fn rate_moments(model: &RateModel) -> Result<(f64, f64), ModelError> {
    model.validate()?;
    Ok((model.mean_rate(), model.rate_cv()?))
}

/// `count` i.i.d. contact-rate draws; deterministic for a fixed seed.
pub fn sample_rates(model: &RateModel, count: usize, seed: u64) -> Result<Vec<f64>, ModelError> {
    model.validate()?;
    let sampler = model.pair_weight_dist().sampler();
    let scale = match model {
        RateModel::Rates { .. } => 1.0,
        RateModel::ParetoShape { t0, .. } => 1.0 / t0,
    };
    let mut rng = derive_rng(seed, crate::rng::salt::SAMPLING, 0);
    Ok((0..count).map(|_| scale * sampler.sample(&mut rng)).collect())
}
