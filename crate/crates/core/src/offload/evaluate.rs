//! Offloading-ratio evaluation: R_off = P{T ≤ TTL} under a given policy,
//! via the analytic predictors or the simulator.

use crate::analytic::{
    access_probability_bound, access_probability_exact, AggregateRateLaw, Estimate,
};
use crate::error::OffloadError;
use crate::models::{AvailabilityRule, PopularityModel, RateModel, RhoFn};
use crate::offload::policy::AllocationPolicy;
use crate::rng::{derive_seed, salt};
use crate::sim::{
    build_scenario_with_counts, estimate_metrics, simulate_static, BuildSpec, HolderSelection,
    Protocol,
};

/// Scenario ingredients for an offloading evaluation.
#[derive(Debug, Clone)]
pub struct OffloadInputs<'a> {
    pub rate: &'a RateModel,
    pub popularity: &'a PopularityModel,
    pub n_nodes: u32,
    pub n_contents: u32,
    pub selection: HolderSelection,
}

/// Evaluation route.
#[derive(Debug, Clone, Copy)]
pub enum EvalVia {
    /// Mean-statistics access bound (needs only μ_λ).
    AnalyticBound,
    /// Exact access form (closed for Gamma/Constant rates, Monte Carlo
    /// pool of the given size otherwise).
    AnalyticExact { pool: usize },
    /// Realize integer holders and simulate static delivery.
    Simulation { replications: u32 },
}

/// The availability rule induced by a deterministic policy table.
fn policy_rule(policy: &AllocationPolicy) -> Result<AvailabilityRule, OffloadError> {
    if policy.table().is_empty() {
        return Err(OffloadError::InvalidParameter(
            "the Random policy has no ρ table; evaluate it via simulation".into(),
        ));
    }
    Ok(AvailabilityRule::deterministic(RhoFn::Table {
        values: policy.table().iter().copied().collect(),
    }))
}

pub fn evaluate_offloading(
    policy: &AllocationPolicy,
    inputs: &OffloadInputs<'_>,
    ttl: f64,
    via: EvalVia,
    seed: u64,
) -> Result<Estimate, OffloadError> {
    if !(ttl >= 0.0) {
        return Err(OffloadError::InvalidParameter(format!(
            "ttl must be >= 0, got {ttl}"
        )));
    }
    match via {
        EvalVia::AnalyticBound => {
            let rule = policy_rule(policy)?;
            let mu = inputs.rate.mean_rate();
            Ok(Estimate::exact(access_probability_bound(
                inputs.popularity,
                &rule,
                mu,
                ttl,
            )?))
        }
        EvalVia::AnalyticExact { pool } => {
            let rule = policy_rule(policy)?;
            let law = AggregateRateLaw::for_rates(
                inputs.rate.pair_weight_dist(),
                pool,
                derive_seed(seed, salt::MC_POOL, 1),
            );
            Ok(access_probability_exact(
                inputs.popularity,
                &rule,
                &law,
                ttl,
            )?)
        }
        EvalVia::Simulation { replications } => {
            if ttl == 0.0 {
                return Ok(Estimate::exact(0.0));
            }
            let spec = BuildSpec {
                rate: inputs.rate,
                popularity: inputs.popularity,
                n_nodes: inputs.n_nodes,
                n_contents: inputs.n_contents,
                selection: inputs.selection,
                protocol: Protocol::Static,
            };
            let scn = build_scenario_with_counts(
                &spec,
                |ns| policy.realize(ns, derive_seed(seed, salt::ROUNDING, 7)),
                seed,
            )?;
            // R_off only needs delivery-by-ttl, so the horizon sits at ttl.
            let records = simulate_static(&scn, replications, ttl, derive_seed(seed, salt::REPLICATION, 3))?;
            let report = estimate_metrics(&records, &[ttl])?;
            Ok(Estimate {
                value: report.access[0].probability,
                se: report.access[0].ci_half / crate::numerics::Z95,
            })
        }
    }
}
