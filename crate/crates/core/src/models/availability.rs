//! The availability–popularity coupling g(m|n) = P{N_a = m | N_p = n}.

use crate::error::ModelError;
use crate::pmf::Pmf;
use crate::models::PopularityModel;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Named mean-availability functions ρ(n) / ḡ(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum RhoFn {
    /// c·n
    Linear { c: f64 },
    /// c·n^k
    Power { c: f64, k: f64 },
    /// c·ln(n)
    Log { c: f64 },
    /// c·√n
    Sqrt { c: f64 },
    /// Explicit table n → ρ(n).
    Table { values: BTreeMap<u32, f64> },
}

impl RhoFn {
    pub fn eval(&self, n: u32) -> f64 {
        let x = f64::from(n);
        match self {
            RhoFn::Linear { c } => c * x,
            RhoFn::Power { c, k } => c * x.powf(*k),
            RhoFn::Log { c } => c * x.ln(),
            RhoFn::Sqrt { c } => c * x.sqrt(),
            RhoFn::Table { values } => values.get(&n).copied().unwrap_or(0.0),
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        let ok = match self {
            RhoFn::Linear { c } | RhoFn::Log { c } | RhoFn::Sqrt { c } => *c >= 0.0,
            RhoFn::Power { c, k } => *c >= 0.0 && k.is_finite(),
            RhoFn::Table { values } => values.values().all(|v| *v >= 0.0 && v.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidParameter(
                "availability mean function must be non-negative".into(),
            ))
        }
    }
}

/// Conditional law of the holder count given popularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum AvailabilityRule {
    /// N_a = ρ(N_p). ρ may be real-valued: the realized holder count is
    /// round(ρ(n)) while analytic mean formulas use the real ρ(n).
    Deterministic { rho: RhoFn },
    /// Binomial(trials = n, success = ḡ(n)/n), matching the declared mean
    /// ḡ(n) with support confined to [0, n].
    Binomial { mean: RhoFn },
    /// g(m|n) ≡ g(m), independent of popularity.
    Uncorrelated { pmf: Pmf },
}

impl AvailabilityRule {
    pub fn deterministic(rho: RhoFn) -> Self {
        AvailabilityRule::Deterministic { rho }
    }

    pub fn binomial(mean: RhoFn) -> Self {
        AvailabilityRule::Binomial { mean }
    }

    pub fn uncorrelated(pmf: Pmf) -> Self {
        AvailabilityRule::Uncorrelated { pmf }
    }

    /// ḡ(n): the declared mean availability at popularity n (real-valued for
    /// deterministic rules; the realized integer law is [`Self::pmf_vec`]).
    pub fn mean(&self, n: u32) -> f64 {
        match self {
            AvailabilityRule::Deterministic { rho } => rho.eval(n),
            AvailabilityRule::Binomial { mean } => mean.eval(n),
            AvailabilityRule::Uncorrelated { pmf } => pmf.mean(),
        }
    }

    /// ρ(n) when the rule is deterministic.
    pub fn deterministic_rho(&self, n: u32) -> Option<f64> {
        match self {
            AvailabilityRule::Deterministic { rho } => Some(rho.eval(n)),
            _ => None,
        }
    }

    /// The realized holder count of a deterministic rule.
    pub fn realized_holders(&self, n: u32) -> Option<u32> {
        self.deterministic_rho(n).map(|r| r.round().max(0.0) as u32)
    }

    /// g(m|n).
    pub fn pmf(&self, m: u32, n: u32) -> f64 {
        match self {
            AvailabilityRule::Deterministic { .. } => {
                if Some(m) == self.realized_holders(n) {
                    1.0
                } else {
                    0.0
                }
            }
            AvailabilityRule::Binomial { mean } => {
                if m > n {
                    return 0.0;
                }
                let p = (mean.eval(n) / f64::from(n)).clamp(0.0, 1.0);
                binomial_ln_pmf(n, p, m).exp()
            }
            AvailabilityRule::Uncorrelated { pmf } => pmf.prob(m),
        }
    }

    /// Full conditional pmf at popularity n, as (m, g(m|n)) pairs.
    pub fn pmf_vec(&self, n: u32) -> Vec<(u32, f64)> {
        match self {
            AvailabilityRule::Deterministic { .. } => {
                vec![(self.realized_holders(n).unwrap(), 1.0)]
            }
            AvailabilityRule::Binomial { mean } => {
                let p = (mean.eval(n) / f64::from(n)).clamp(0.0, 1.0);
                (0..=n).map(|m| (m, binomial_ln_pmf(n, p, m).exp())).collect()
            }
            AvailabilityRule::Uncorrelated { pmf } => pmf.iter().collect(),
        }
    }

    /// Draw a holder count for a content of popularity n.
    pub fn sample(&self, n: u32, rng: &mut impl Rng) -> u32 {
        match self {
            AvailabilityRule::Deterministic { .. } => self.realized_holders(n).unwrap(),
            AvailabilityRule::Binomial { mean } => {
                let p = (mean.eval(n) / f64::from(n)).clamp(0.0, 1.0);
                rand_distr::Binomial::new(u64::from(n), p)
                    .expect("validated")
                    .sample(rng) as u32
            }
            AvailabilityRule::Uncorrelated { pmf } => pmf.sample(rng),
        }
    }

    /// Check the rule against a popularity model and network size: every
    /// holder count the rule can produce must fit in [0, N].
    pub fn validate(&self, pop: &PopularityModel, n_nodes: u32) -> Result<(), ModelError> {
        match self {
            AvailabilityRule::Deterministic { rho } | AvailabilityRule::Binomial { mean: rho } => {
                rho.validate()?;
                for n in pop.pmf().support() {
                    let g = self.mean(n);
                    if !g.is_finite() || g < 0.0 {
                        return Err(ModelError::InvalidParameter(format!(
                            "availability mean at n={n} is {g}"
                        )));
                    }
                    if g > f64::from(n_nodes) {
                        return Err(ModelError::InvalidParameter(format!(
                            "availability mean {g} at n={n} exceeds network size {n_nodes}"
                        )));
                    }
                    if matches!(self, AvailabilityRule::Binomial { .. }) && g > f64::from(n) {
                        return Err(ModelError::InvalidParameter(format!(
                            "binomial availability mean {g} at n={n} exceeds the trial count n"
                        )));
                    }
                }
                Ok(())
            }
            AvailabilityRule::Uncorrelated { pmf } => {
                if u64::from(pmf.max_value()) > u64::from(n_nodes) {
                    return Err(ModelError::InvalidParameter(format!(
                        "availability support {} exceeds network size {n_nodes}",
                        pmf.max_value()
                    )));
                }
                Ok(())
            }
        }
    }
}

/// ln of the Binomial(n, p) pmf at m, stable for large n.
fn binomial_ln_pmf(n: u32, p: f64, m: u32) -> f64 {
    debug_assert!(m <= n);
    if p == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if m == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (n_f, m_f) = (f64::from(n), f64::from(m));
    ln_choose(n, m) + m_f * p.ln() + (n_f - m_f) * (1.0 - p).ln()
}

fn ln_choose(n: u32, m: u32) -> f64 {
    // ln C(n, m) summed over the shorter side; n stays small enough here
    // (network-bounded) that the direct sum is both fast and accurate.
    let m = m.min(n - m);
    let mut acc = 0.0;
    for i in 0..m {
        acc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    acc
}

/// g(m|n), with the popularity-support domain check.
pub fn availability_pmf(
    rule: &AvailabilityRule,
    pop: &PopularityModel,
    m: u32,
    n: u32,
) -> Result<f64, ModelError> {
    if !pop.contains(n) {
        return Err(ModelError::OutsideSupport(n));
    }
    Ok(rule.pmf(m, n))
}

/// ḡ(n), with the popularity-support domain check.
pub fn availability_mean(
    rule: &AvailabilityRule,
    pop: &PopularityModel,
    n: u32,
) -> Result<f64, ModelError> {
    if !pop.contains(n) {
        return Err(ModelError::OutsideSupport(n));
    }
    Ok(rule.mean(n))
}
