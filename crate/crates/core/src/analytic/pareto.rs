//! Performance metrics under Pareto inter-contact times.
//!
//! Residual inter-contact times are Pareto(α_ij, t0) with CCDF
//! (t0/(t0+t))^{α_ij}; the minimum over m holders is Pareto(A, t0) with
//! A = Σ α_ij, so the analysis mirrors the exponential case with the
//! aggregate shape A in place of the aggregate rate X.

use crate::analytic::aggregate::{AggregateRateLaw, Estimate, Metric, MetricSum, SumFunctional};
use crate::analytic::metrics::{check_ttl, request_weighted_expectation};
use crate::error::AnalyticError;
use crate::models::{AvailabilityRule, PopularityModel, RateDist};

/// Exact predictions and mean-statistics bounds under Pareto residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoMetrics {
    /// E[T] = (t0/E_p[n]) · E_p[n·Σ_m E_{mα}[1/(A−1)]·g(m|n)].
    pub delay: Metric,
    /// P{T ≤ ttl} = 1 − (1/E_p[n]) · E_p[n·Σ_m E_{mα}[r^A]·g(m|n)],
    /// with r = t0/(t0+ttl).
    pub probability: Estimate,
    /// Lower bound (t0/E_p[n]) · E_p[n/(ḡ(n)·μ_α − 1)].
    pub delay_bound: Metric,
    /// Upper bound 1 − (1/E_p[n]) · E_p[n·r^{ḡ(n)·μ_α}].
    pub probability_bound: f64,
}

/// Evaluate all four Pareto metrics for shape distribution f_α and
/// common scale t0.
pub fn pareto_metrics(
    shapes: &RateDist,
    t0: f64,
    pop: &PopularityModel,
    rule: &AvailabilityRule,
    ttl: f64,
    pool: usize,
    seed: u64,
) -> Result<ParetoMetrics, AnalyticError> {
    shapes.validate().map_err(AnalyticError::from)?;
    check_ttl(ttl)?;
    if !(t0 > 0.0) {
        return Err(AnalyticError::Precondition(format!(
            "Pareto scale t0 must be > 0, got {t0}"
        )));
    }
    let law = AggregateRateLaw::for_rates(shapes, pool, seed);
    let mu_alpha = shapes.mean();
    let r = t0 / (t0 + ttl);
    let e_n = pop.mean();

    let delay =
        request_weighted_expectation(pop, rule, &law, SumFunctional::MeanInverseShifted(1.0))?
            .scale(t0);

    let survival = request_weighted_expectation(pop, rule, &law, SumFunctional::Power(r))?;
    let Metric::Finite(s) = survival else {
        unreachable!("survival expectations are bounded")
    };
    let probability = Estimate {
        value: 1.0 - s.value,
        se: s.se,
    };

    let mut bound_acc = MetricSum::default();
    let mut survival_bound = 0.0;
    for (n, p) in pop.pmf().iter() {
        let w = f64::from(n) * p / e_n;
        let a = rule.mean(n) * mu_alpha;
        if a > 1.0 {
            bound_acc.add_exact(w, t0 / (a - 1.0));
        } else {
            bound_acc.add(1.0, &Metric::Infinite);
        }
        survival_bound += w * r.powf(a);
    }

    Ok(ParetoMetrics {
        delay,
        probability,
        delay_bound: bound_acc.finish(),
        probability_bound: 1.0 - survival_bound,
    })
}
