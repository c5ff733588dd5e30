//! The two-window temporal experiment: compare QoS allocations computed
//! from the window-averaged rate and from the first window's rate alone,
//! against the Log baseline, under alternating contact-rate windows.

use crate::analytic::Estimate;
use crate::error::OffloadError;
use crate::models::{PopularityModel, RateDist, RateModel};
use crate::numerics::Z95;
use crate::offload::policy::{baseline_allocation, AllocationPolicy, PolicyKind};
use crate::offload::qos::qos_allocation;
use crate::rng::{derive_seed, salt};
use crate::sim::{
    build_scenario_with_counts, estimate_metrics, simulate_temporal, BuildSpec, HolderSelection,
    PairWeights, Protocol, SecondWindow,
};

/// Mechanism order in every [`TemporalCell`].
pub const MECHANISMS: [&str; 3] = ["optimal-average", "optimal-window", "log"];

#[derive(Debug, Clone)]
pub struct TemporalSetup<'a> {
    /// Rate distribution of the odd windows (the one that also governs the
    /// window-based optimizer's knowledge).
    pub rate1: &'a RateDist,
    /// Rate distribution of the even windows.
    pub rate2: &'a RateDist,
    pub popularity: &'a PopularityModel,
    pub n_nodes: u32,
    pub n_contents: u32,
    pub ttl: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalCell {
    pub window: f64,
    /// R_off per mechanism, ordered as [`MECHANISMS`].
    pub r_off: [Estimate; 3],
}

/// Simulate the three mechanisms at each window length. All cells share the
/// rate matrices and requester placements; only holder counts differ.
pub fn temporal_offload_experiment(
    setup: &TemporalSetup<'_>,
    windows: &[f64],
    replications: u32,
    seed: u64,
) -> Result<Vec<TemporalCell>, OffloadError> {
    setup.rate1.validate().map_err(OffloadError::Model)?;
    setup.rate2.validate().map_err(OffloadError::Model)?;
    if windows.iter().any(|w| !(*w > 0.0)) {
        return Err(OffloadError::InvalidParameter(
            "window lengths must be > 0".into(),
        ));
    }
    let mu1 = setup.rate1.mean();
    let mu2 = setup.rate2.mean();
    let mu_avg = 0.5 * (mu1 + mu2);

    let policies: [AllocationPolicy; 3] = [
        qos_allocation(setup.popularity, mu_avg, setup.ttl, setup.budget)?.policy,
        qos_allocation(setup.popularity, mu1, setup.ttl, setup.budget)?.policy,
        baseline_allocation(PolicyKind::Log, setup.popularity, setup.budget)?,
    ];

    let rate_model = RateModel::Rates {
        dist: setup.rate1.clone(),
    };
    let spec = BuildSpec {
        rate: &rate_model,
        popularity: setup.popularity,
        n_nodes: setup.n_nodes,
        n_contents: setup.n_contents,
        selection: HolderSelection::UniformRandom,
        protocol: Protocol::Static,
    };

    let mut cells = Vec::with_capacity(windows.len());
    for &window in windows {
        let mut r_off = [Estimate::exact(0.0); 3];
        for (pi, policy) in policies.iter().enumerate() {
            let mut scn = build_scenario_with_counts(
                &spec,
                |ns| policy.realize(ns, derive_seed(seed, salt::ROUNDING, pi as u64)),
                seed,
            )?;
            scn.second_window = Some(SecondWindow {
                weights: PairWeights::sampled(
                    setup.rate2.clone(),
                    derive_seed(seed, salt::RATE_MATRIX_W2, 0),
                ),
                window,
            });
            let records = simulate_temporal(
                &scn,
                replications,
                setup.ttl,
                derive_seed(seed, salt::REPLICATION, pi as u64),
            )?;
            let report = estimate_metrics(&records, &[setup.ttl])?;
            r_off[pi] = Estimate {
                value: report.access[0].probability,
                se: report.access[0].ci_half / Z95,
            };
        }
        cells.push(TemporalCell { window, r_off });
    }
    Ok(cells)
}
