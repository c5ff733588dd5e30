//! Extensions of the base predictors: multi-hop dissemination with
//! time-varying availability, time-varying popularity, and
//! mobility-dependent holder allocation.

use crate::analytic::aggregate::{AggregateRateLaw, Estimate, Metric, MetricSum};
use crate::analytic::metrics::{access_probability_bound, access_probability_exact, check_ttl};
use crate::error::AnalyticError;
use crate::models::{AvailabilityRule, PopularityModel, RateDist};
use crate::numerics::harmonic_span;
use crate::rng::{derive_rng, salt};

fn check_mu(mu_lambda: f64) -> Result<(), AnalyticError> {
    if mu_lambda > 0.0 {
        Ok(())
    } else {
        Err(AnalyticError::Precondition(format!(
            "mean contact rate must be > 0, got {mu_lambda}"
        )))
    }
}

/// Multi-hop dissemination where every served requester becomes a holder:
/// E[T] ≈ (1/(μ_λ·E_p[n])) · E_p[ln(1 + n/ḡ(n))].
pub fn multihop_delay(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
) -> Result<Metric, AnalyticError> {
    check_mu(mu_lambda)?;
    let e_n = pop.mean();
    let mut acc = MetricSum::default();
    for (n, p) in pop.pmf().iter() {
        let g = rule.mean(n);
        if g <= 0.0 {
            acc.add(1.0, &Metric::Infinite);
        } else {
            acc.add_exact(p / (mu_lambda * e_n), (1.0 + f64::from(n) / g).ln());
        }
    }
    Ok(acc.finish())
}

/// Probabilistic cooperation: a served requester becomes a holder with
/// probability p. E[T] ≈ (1/(p·μ_λ·E_p[n])) · E_p[ln(1 + p·n/ḡ(n))].
pub fn multihop_delay_cooperation(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
    p: f64,
) -> Result<Metric, AnalyticError> {
    check_mu(mu_lambda)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(AnalyticError::Precondition(format!(
            "cooperation probability must be in (0, 1], got {p}"
        )));
    }
    let e_n = pop.mean();
    let mut acc = MetricSum::default();
    for (n, pn) in pop.pmf().iter() {
        let g = rule.mean(n);
        if g <= 0.0 {
            acc.add(1.0, &Metric::Infinite);
        } else {
            acc.add_exact(
                pn / (p * mu_lambda * e_n),
                (1.0 + p * f64::from(n) / g).ln(),
            );
        }
    }
    Ok(acc.finish())
}

/// Result of the limited-spreading form; `clamped` reports popularity values
/// with n < L, where the (n−L) term was clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitedSpread {
    pub value: Metric,
    pub clamped: bool,
}

/// Spreading limited to L new holders:
/// E[T] ≈ (1/(μ_λ·E_p[n])) · E_p[(n−L)/(ḡ(n)+L) + ln(1 + L/ḡ(n))].
pub fn multihop_delay_limited(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
    l: u32,
) -> Result<LimitedSpread, AnalyticError> {
    check_mu(mu_lambda)?;
    let e_n = pop.mean();
    let l_f = f64::from(l);
    let mut acc = MetricSum::default();
    let mut clamped = false;
    for (n, p) in pop.pmf().iter() {
        let g = rule.mean(n);
        if g <= 0.0 {
            acc.add(1.0, &Metric::Infinite);
            continue;
        }
        let excess = f64::from(n) - l_f;
        if excess < 0.0 {
            clamped = true;
        }
        acc.add_exact(
            p / (mu_lambda * e_n),
            excess.max(0.0) / (g + l_f) + (1.0 + l_f / g).ln(),
        );
    }
    Ok(LimitedSpread {
        value: acc.finish(),
        clamped,
    })
}

/// The harmonic-sum form behind the multi-hop approximation:
/// E[T] ≈ (1/(μ_λ·E_p[n])) · E_p[Σ_{k=ḡ(n)}^{ḡ(n)+n−1} 1/k],
/// generalized to real ḡ(n) via digamma differences. Internal oracle for
/// [`multihop_delay`]; the ln form is the public prediction.
pub fn multihop_delay_harmonic(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
) -> Result<Metric, AnalyticError> {
    check_mu(mu_lambda)?;
    let e_n = pop.mean();
    let mut acc = MetricSum::default();
    for (n, p) in pop.pmf().iter() {
        let g = rule.mean(n);
        if g <= 0.0 {
            acc.add(1.0, &Metric::Infinite);
        } else {
            acc.add_exact(p / (mu_lambda * e_n), harmonic_span(g, n));
        }
    }
    Ok(acc.finish())
}

/// How the access probability inside [`delivery_probability_with_loss`] is
/// evaluated.
pub enum AccessVia<'a> {
    Bound { mu_lambda: f64 },
    Exact { law: &'a AggregateRateLaw },
}

/// Time-varying popularity: P_delivery = P{T ≤ ttl} · (1 − P_loss{t ≤ ttl}).
pub fn delivery_probability_with_loss(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    via: AccessVia<'_>,
    ttl: f64,
    loss_cdf: impl Fn(f64) -> f64,
) -> Result<Estimate, AnalyticError> {
    check_ttl(ttl)?;
    let loss = loss_cdf(ttl);
    if !(0.0..=1.0).contains(&loss) {
        return Err(AnalyticError::Precondition(format!(
            "loss cdf must map into [0, 1], got {loss} at ttl {ttl}"
        )));
    }
    let access = match via {
        AccessVia::Bound { mu_lambda } => {
            Estimate::exact(access_probability_bound(pop, rule, mu_lambda, ttl)?)
        }
        AccessVia::Exact { law } => access_probability_exact(pop, rule, law, ttl)?,
    };
    Ok(Estimate {
        value: access.value * (1.0 - loss),
        se: access.se * (1.0 - loss),
    })
}

/// The π(λ) form behind an effective-rate computation.
pub enum Weighting<'a> {
    /// π ≡ constant: mobility-oblivious allocation, μ^(π) = μ_λ.
    Constant,
    /// π(λ) ∝ λ: the product-weight holder selection, μ^(π) = μ_λ(1+CV²).
    Linear,
    /// Arbitrary non-negative weight function.
    Custom(&'a dyn Fn(f64) -> f64),
}

/// Mean requester–holder contact rate under mobility-dependent allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveRate {
    /// μ_λ^(π) = E_λ[λ·π(λ)] / E_λ[π(λ)].
    pub value: f64,
    /// Which π(λ) form produced it.
    pub provenance: String,
}

/// μ_λ^(π); every mean-statistics formula accepts it in place of μ_λ.
pub fn effective_rate(
    dist: &RateDist,
    pi: &Weighting<'_>,
) -> Result<EffectiveRate, AnalyticError> {
    dist.validate().map_err(AnalyticError::from)?;
    let (value, provenance) = match pi {
        Weighting::Constant => (dist.mean(), "constant"),
        Weighting::Linear => {
            let cv = dist.cv().map_err(AnalyticError::from)?;
            (dist.mean() * (1.0 + cv * cv), "linear")
        }
        Weighting::Custom(f) => (custom_effective_rate(dist, f)?, "custom"),
    };
    Ok(EffectiveRate {
        value,
        provenance: provenance.to_string(),
    })
}

fn custom_effective_rate(
    dist: &RateDist,
    pi: &dyn Fn(f64) -> f64,
) -> Result<f64, AnalyticError> {
    let ratio = |num: f64, den: f64| -> Result<f64, AnalyticError> {
        if den <= 1e-12 {
            Err(AnalyticError::Precondition(
                "E[π(λ)] must be > 0".to_string(),
            ))
        } else {
            Ok(num / den)
        }
    };
    match dist {
        RateDist::Constant { value } => ratio(*value * pi(*value), pi(*value)),
        RateDist::Empirical { values } => {
            let num: f64 = values.iter().map(|&v| v * pi(v)).sum();
            let den: f64 = values.iter().map(|&v| pi(v)).sum();
            ratio(num / values.len() as f64, den / values.len() as f64)
        }
        _ => {
            // Seeded Monte Carlo for the parametric families.
            const SAMPLES: usize = 400_000;
            let sampler = dist.sampler();
            let mut rng = derive_rng(0x0065_6666_7261_7465, salt::SAMPLING, 1);
            let (mut num, mut den) = (0.0, 0.0);
            for _ in 0..SAMPLES {
                let x = sampler.sample(&mut rng);
                let w = pi(x);
                num += x * w;
                den += w;
            }
            ratio(num / SAMPLES as f64, den / SAMPLES as f64)
        }
    }
}
