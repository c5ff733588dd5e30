//! The QoS allocation: maximize the offloading ratio R_off = P{T ≤ TTL}
//! under a mean-copies budget,
//!
//!   min_ρ Σ_n n·e^{−ρ_n·μ_λ·TTL}·P_p(n)   s.t.  Σ_n ρ_n·P_p(n) = c_M, ρ_n ≥ 0.
//!
//! The KKT stationarity condition gives the water-filling form
//! ρ_n = max(0, ln(n·μ_λ·TTL/λ0)/(μ_λ·TTL)); the multiplier λ0 is found by
//! bisection on the strictly monotone budget constraint.

use crate::error::OffloadError;
use crate::models::PopularityModel;
use crate::offload::policy::{AllocationPolicy, PolicyKind};

const MAX_ITERATIONS: u32 = 200;
/// Budget match required of the multiplier search.
const BUDGET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QosSolution {
    pub policy: AllocationPolicy,
    /// The Lagrange multiplier λ0 at the optimum.
    pub multiplier: f64,
    /// Optimal objective Σ_n n·e^{−ρ_n·μ_λ·TTL}·P_p(n).
    pub objective: f64,
    /// Popularity classes with ρ_n > 0.
    pub active: Vec<u32>,
    pub iterations: u32,
}

pub fn qos_allocation(
    pop: &PopularityModel,
    mu_lambda: f64,
    ttl: f64,
    budget: f64,
) -> Result<QosSolution, OffloadError> {
    if !(mu_lambda > 0.0) || !(ttl > 0.0) {
        return Err(OffloadError::InvalidParameter(format!(
            "need μ_λ·ttl > 0, got μ_λ = {mu_lambda}, ttl = {ttl}"
        )));
    }
    if !(budget > 0.0) {
        return Err(OffloadError::InvalidParameter(format!(
            "budget must be > 0, got {budget}"
        )));
    }
    let s = mu_lambda * ttl;
    let rho_at = |lambda0: f64| {
        move |n: u32| ((f64::from(n) * s / lambda0).ln() / s).max(0.0)
    };
    let spent = |lambda0: f64| pop.expect(rho_at(lambda0));

    // All classes inactive at λ_hi; shrink λ_lo geometrically until the
    // budget is exceeded.
    let mut hi = f64::from(pop.max_n()) * s;
    let mut lo = hi;
    let mut iterations = 0;
    while spent(lo) <= budget {
        lo *= 0.5;
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(OffloadError::NoConvergence {
                iterations,
                low: lo,
                high: hi,
                budget_low: spent(hi),
                budget_high: spent(lo),
            });
        }
    }

    let multiplier = loop {
        let mid = 0.5 * (lo + hi);
        let b = spent(mid);
        if (b - budget).abs() <= BUDGET_TOL * budget.max(1.0) {
            break mid;
        }
        if b > budget {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(OffloadError::NoConvergence {
                iterations,
                low: lo,
                high: hi,
                budget_low: spent(hi),
                budget_high: spent(lo),
            });
        }
    };

    let rho = rho_at(multiplier);
    let table: Vec<(u32, f64)> = pop.pmf().support().map(|n| (n, rho(n))).collect();
    let objective = pop.expect(|n| f64::from(n) * (-rho(n) * s).exp());
    let active = table
        .iter()
        .filter(|&&(_, r)| r > 0.0)
        .map(|&(n, _)| n)
        .collect();
    Ok(QosSolution {
        policy: AllocationPolicy::from_table(PolicyKind::QoSOptimal { ttl }, budget, table),
        multiplier,
        objective,
        active,
        iterations,
    })
}
