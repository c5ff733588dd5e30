//! Allocation policies: deterministic holder-count tables ρ_n meeting a
//! mean budget E_p[ρ(n)] = c_M, plus the copy-scattering Random baseline.

use crate::error::OffloadError;
use crate::models::PopularityModel;
use crate::rng::{derive_rng, salt};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum PolicyKind {
    /// ρ(n) = c_k·n^k with c_k = c_M/E_p[n^k].
    PowerLaw { k: f64 },
    /// ρ(n) ∝ ln(n).
    Log,
    /// The delay-optimal ρ*(n) = (c_M/E_p[√n])·√n.
    SqrtOptimal,
    /// ρ(n) = c_M for every n (PowerLaw with k = 0).
    Uniform,
    /// M·c_M copies scattered by repeated uniform content choice.
    Random,
    /// Water-filling solution of the QoS problem at deadline `ttl`.
    QoSOptimal { ttl: f64 },
}

/// A holder-allocation policy. Deterministic kinds carry a realized table
/// ρ_n per popularity value; `Random` has no table and allocates at
/// realization time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationPolicy {
    pub kind: PolicyKind,
    /// Mean copies per content, c_M.
    pub budget: f64,
    table: Vec<(u32, f64)>,
}

impl AllocationPolicy {
    pub(crate) fn from_table(
        kind: PolicyKind,
        budget: f64,
        table: Vec<(u32, f64)>,
    ) -> AllocationPolicy {
        debug_assert!(table.windows(2).all(|w| w[0].0 < w[1].0));
        AllocationPolicy {
            kind,
            budget,
            table,
        }
    }

    /// ρ(n); zero for popularity values outside the table.
    pub fn rho(&self, n: u32) -> f64 {
        self.table
            .binary_search_by_key(&n, |&(v, _)| v)
            .map(|i| self.table[i].1)
            .unwrap_or(0.0)
    }

    /// The (n, ρ_n) table; empty for `Random`.
    pub fn table(&self) -> &[(u32, f64)] {
        &self.table
    }

    /// E_p[ρ(n)] under the popularity model the table was built for.
    pub fn mean_under(&self, pop: &PopularityModel) -> f64 {
        pop.expect(|n| self.rho(n))
    }

    /// Integer holder counts for a set of materialized contents (`ns` holds
    /// each content's popularity). Deterministic tables use randomized
    /// rounding, preserving the budget in expectation; `Random` scatters
    /// exactly round(M·c_M) copies by repeated uniform content choice.
    pub fn realize(&self, ns: &[u32], seed: u64) -> Vec<u32> {
        let mut rng = derive_rng(seed, salt::ROUNDING, 0);
        match self.kind {
            PolicyKind::Random => {
                let mut counts = vec![0u32; ns.len()];
                let copies = (self.budget * ns.len() as f64).round() as u64;
                for _ in 0..copies {
                    counts[rng.random_range(0..ns.len())] += 1;
                }
                counts
            }
            _ => ns
                .iter()
                .map(|&n| {
                    let rho = self.rho(n).max(0.0);
                    let floor = rho.floor();
                    let frac = rho - floor;
                    floor as u32 + u32::from(rng.random::<f64>() < frac)
                })
                .collect(),
        }
    }
}

/// Delay-optimal allocation: ρ*(n) = (c_M/E_p[√n])·√n.
pub fn sqrt_allocation(pop: &PopularityModel, budget: f64) -> AllocationPolicy {
    assert!(budget > 0.0, "budget must be > 0");
    let norm = budget / pop.expect(|n| f64::from(n).sqrt());
    let table = pop
        .pmf()
        .support()
        .map(|n| (n, norm * f64::from(n).sqrt()))
        .collect();
    AllocationPolicy::from_table(PolicyKind::SqrtOptimal, budget, table)
}

/// The baseline policies of the offloading study.
pub fn baseline_allocation(
    kind: PolicyKind,
    pop: &PopularityModel,
    budget: f64,
) -> Result<AllocationPolicy, OffloadError> {
    if !(budget > 0.0) {
        return Err(OffloadError::InvalidParameter(format!(
            "budget must be > 0, got {budget}"
        )));
    }
    let shaped = |f: &dyn Fn(u32) -> f64| -> Result<Vec<(u32, f64)>, OffloadError> {
        let norm = pop.expect(f);
        if norm <= 0.0 {
            return Err(OffloadError::ZeroNormalizer(format!(
                "E_p[shape(n)] = {norm}"
            )));
        }
        Ok(pop
            .pmf()
            .support()
            .map(|n| (n, budget * f(n) / norm))
            .collect())
    };
    let table = match kind {
        PolicyKind::PowerLaw { k } => shaped(&|n| f64::from(n).powf(k))?,
        PolicyKind::Uniform => shaped(&|_| 1.0)?,
        PolicyKind::Log => shaped(&|n| f64::from(n).ln())?,
        PolicyKind::Random => Vec::new(),
        PolicyKind::SqrtOptimal | PolicyKind::QoSOptimal { .. } => {
            return Err(OffloadError::InvalidParameter(
                "use sqrt_allocation / qos_allocation for the optimal policies".into(),
            ))
        }
    };
    Ok(AllocationPolicy::from_table(kind, budget, table))
}
