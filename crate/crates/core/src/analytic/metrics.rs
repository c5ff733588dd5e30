//! Request-weighted laws and the core delay / access-probability predictors.
//!
//! A random request is size-biased by popularity: the request law weights
//! P_p(n) by n/E_p[n]. The exact predictors condition on the holder count m
//! and integrate the aggregate-rate law; the bounds replace both inner
//! expectations by their Jensen limits and need only μ_λ and ḡ(n).

use crate::analytic::aggregate::{
    AggregateRateLaw, Estimate, Metric, MetricSum, SumFunctional,
};
use crate::error::AnalyticError;
use crate::models::{AvailabilityRule, PopularityModel};
use crate::pmf::Pmf;

/// Popularity law of the content behind a uniformly random request:
/// P_p^req(n) = n·P_p(n)/E_p[n].
pub fn request_popularity(pop: &PopularityModel) -> Result<Pmf, AnalyticError> {
    pop.pmf()
        .reweight(f64::from)
        .map_err(AnalyticError::from)
}

/// Availability law of the content behind a uniformly random request:
/// P_a^req(m) = E_p[n·g(m|n)]/E_p[n].
pub fn request_availability(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
) -> Result<Pmf, AnalyticError> {
    let mut weights = std::collections::BTreeMap::new();
    for (n, p) in pop.pmf().iter() {
        let w = f64::from(n) * p;
        for (m, g) in rule.pmf_vec(n) {
            if g > 0.0 {
                *weights.entry(m).or_insert(0.0) += w * g;
            }
        }
    }
    Pmf::from_weights(weights.into_iter().collect()).map_err(AnalyticError::from)
}

/// The request-weighted inner expectation shared by every exact predictor:
///
///   (1/E_p[n]) · E_p[ n · Σ_m E_X[f(X) | m] · g(m|n) ]
///
/// Deterministic rules on a closed-form law keep the real-valued ρ(n);
/// otherwise the realized integer holder counts are used and Monte Carlo
/// requests are served by one batched pass.
pub fn request_weighted_expectation(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    law: &AggregateRateLaw,
    f: SumFunctional,
) -> Result<Metric, AnalyticError> {
    let e_n = pop.mean();
    let mut acc = MetricSum::default();

    if law.is_closed() {
        for (n, p) in pop.pmf().iter() {
            let w = f64::from(n) * p / e_n;
            if let Some(rho) = rule.deterministic_rho(n) {
                acc.add(w, &law.expect_closed(rho, f).expect("closed"));
            } else {
                for (m, g) in rule.pmf_vec(n) {
                    if g > 0.0 {
                        acc.add(w * g, &law.expect_closed(f64::from(m), f).expect("closed"));
                    }
                }
            }
        }
        return Ok(acc.finish());
    }

    // Monte Carlo route: gather every needed integer holder count first.
    let mut per_n: Vec<(f64, Vec<(u32, f64)>)> = Vec::with_capacity(pop.pmf().len());
    let mut ms: Vec<u32> = Vec::new();
    for (n, p) in pop.pmf().iter() {
        let w = f64::from(n) * p / e_n;
        let entries: Vec<(u32, f64)> = rule
            .pmf_vec(n)
            .into_iter()
            .filter(|&(_, g)| g > 0.0)
            .collect();
        ms.extend(entries.iter().map(|&(m, _)| m));
        per_n.push((w, entries));
    }
    ms.sort_unstable();
    ms.dedup();
    let values = law.expect_batch(&ms, &[f])?;
    let lookup = |m: u32| &values[0][ms.binary_search(&m).expect("gathered")];
    for (w, entries) in &per_n {
        for &(m, g) in entries {
            acc.add(w * g, lookup(m));
        }
    }
    Ok(acc.finish())
}

/// Expected content access delay (exact form):
/// E[T] = (1/E_p[n]) · E_p[n · Σ_m E_{mλ}[1/x] · g(m|n)].
///
/// Reports `Metric::Infinite` when request-weighted mass sits on divergent
/// holder counts (m = 0, or m·k ≤ 1 under Gamma rates).
pub fn expected_delay_exact(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    law: &AggregateRateLaw,
) -> Result<Metric, AnalyticError> {
    request_weighted_expectation(pop, rule, law, SumFunctional::MeanInverse)
}

/// Lower bound on the expected access delay (mean statistics only):
/// E[T] ≥ (1/(μ_λ·E_p[n])) · E_p[n/ḡ(n)].
pub fn expected_delay_bound(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
) -> Result<Metric, AnalyticError> {
    if !(mu_lambda > 0.0) {
        return Err(AnalyticError::Precondition(format!(
            "mean contact rate must be > 0, got {mu_lambda}"
        )));
    }
    let e_n = pop.mean();
    let mut acc = MetricSum::default();
    for (n, p) in pop.pmf().iter() {
        let g = rule.mean(n);
        if g <= 0.0 {
            acc.add(1.0, &Metric::Infinite);
        } else {
            acc.add_exact(f64::from(n) * p / e_n, 1.0 / (mu_lambda * g));
        }
    }
    Ok(acc.finish())
}

/// Probability of access within `ttl` (exact form):
/// P{T ≤ ttl} = 1 − (1/E_p[n]) · E_p[n · Σ_m E_{mλ}[e^{−x·ttl}] · g(m|n)].
pub fn access_probability_exact(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    law: &AggregateRateLaw,
    ttl: f64,
) -> Result<Estimate, AnalyticError> {
    check_ttl(ttl)?;
    let survival =
        request_weighted_expectation(pop, rule, law, SumFunctional::Laplace(ttl))?;
    let Metric::Finite(s) = survival else {
        unreachable!("survival expectations are bounded")
    };
    Ok(Estimate {
        value: 1.0 - s.value,
        se: s.se,
    })
}

/// Upper bound on the access probability (mean statistics only):
/// P{T ≤ ttl} ≤ 1 − (1/E_p[n]) · E_p[n · e^{−ḡ(n)·μ_λ·ttl}].
pub fn access_probability_bound(
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    mu_lambda: f64,
    ttl: f64,
) -> Result<f64, AnalyticError> {
    if !(mu_lambda > 0.0) {
        return Err(AnalyticError::Precondition(format!(
            "mean contact rate must be > 0, got {mu_lambda}"
        )));
    }
    check_ttl(ttl)?;
    let e_n = pop.mean();
    let survival = pop
        .pmf()
        .expect(|n| f64::from(n) * (-rule.mean(n) * mu_lambda * ttl).exp())
        / e_n;
    Ok(1.0 - survival)
}

pub(crate) fn check_ttl(ttl: f64) -> Result<(), AnalyticError> {
    if ttl >= 0.0 && ttl.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::Precondition(format!(
            "ttl must be finite and >= 0, got {ttl}"
        )))
    }
}
