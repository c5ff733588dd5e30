//! The popularity-blind offloading heuristic: start every popularity
//! estimate at 1 (a uniform allocation), increment a content's estimate at
//! each of its deliveries, and periodically re-run the square-root
//! allocation on the estimates, adding or releasing holders.

use crate::error::{OffloadError, SimError};
use crate::models::{ContactLaw, PopularityModel, RateModel};
use crate::rng::{derive_rng, derive_seed, salt};
use crate::sim::{
    build_scenario_with_counts, BuildSpec, DeliveryRecord, HolderSelection, Outcome, Protocol,
    Scenario,
};
use rand::Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
pub struct BlindInputs<'a> {
    /// Exponential contacts only: the reallocation feedback relies on
    /// memoryless per-requester delivery clocks.
    pub rate: &'a RateModel,
    pub popularity: &'a PopularityModel,
    pub n_nodes: u32,
    pub n_contents: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub replication: u32,
    pub time: f64,
    pub deliveries: u64,
}

type WorldResult = (Vec<DeliveryRecord>, Vec<TrajectoryPoint>, Vec<u64>);

#[derive(Debug, Clone, PartialEq)]
pub struct BlindRun {
    pub records: Vec<DeliveryRecord>,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Final popularity estimates, one vector per replication.
    pub final_estimates: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Event {
    time: f64,
    content: u32,
    req_idx: u32,
    version: u32,
}

impl Eq for Event {}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.content.cmp(&self.content))
            .then_with(|| other.req_idx.cmp(&self.req_idx))
    }
}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn run_popularity_blind(
    inputs: &BlindInputs<'_>,
    budget: f64,
    update_every: u64,
    replications: u32,
    horizon: f64,
    seed: u64,
) -> Result<BlindRun, OffloadError> {
    if !matches!(inputs.rate.contact_law(), ContactLaw::Exponential) {
        return Err(OffloadError::Sim(SimError::Unsupported(
            "popularity-blind runs require exponential contacts".into(),
        )));
    }
    if update_every == 0 || !(budget > 0.0) || !(horizon > 0.0) {
        return Err(OffloadError::InvalidParameter(
            "need update_every >= 1, budget > 0, horizon > 0".into(),
        ));
    }

    let runs: Vec<WorldResult> = (0..replications)
        .into_par_iter()
        .map(|rep| run_one(inputs, budget, update_every, horizon, seed, rep))
        .collect::<Result<_, OffloadError>>()?;

    let mut out = BlindRun {
        records: Vec::new(),
        trajectory: Vec::new(),
        final_estimates: Vec::new(),
    };
    for (records, traj, est) in runs {
        out.records.extend(records);
        out.trajectory.extend(traj);
        out.final_estimates.push(est);
    }
    Ok(out)
}

fn run_one(
    inputs: &BlindInputs<'_>,
    budget: f64,
    update_every: u64,
    horizon: f64,
    seed: u64,
    rep: u32,
) -> Result<WorldResult, OffloadError> {
    let world_seed = derive_seed(seed, salt::REALLOC, u64::from(rep));
    let mut rng = derive_rng(world_seed, salt::REALLOC, 1);

    // Initial allocation: all estimates are 1, so the square-root rule
    // degenerates to `budget` copies per content.
    let spec = BuildSpec {
        rate: inputs.rate,
        popularity: inputs.popularity,
        n_nodes: inputs.n_nodes,
        n_contents: inputs.n_contents,
        selection: HolderSelection::UniformRandom,
        protocol: Protocol::Static,
    };
    let initial = {
        let mut rng = derive_rng(world_seed, salt::ROUNDING, 2);
        move |ns: &[u32]| -> Vec<u32> {
            ns.iter()
                .map(|_| round_randomized(budget, &mut rng))
                .collect()
        }
    };
    let scn = build_scenario_with_counts(&spec, initial, world_seed)?;

    let m = scn.contents.len();
    let mut holders: Vec<Vec<u32>> = scn.contents.iter().map(|c| c.holders.clone()).collect();
    let mut served: Vec<Vec<bool>> = scn
        .contents
        .iter()
        .map(|c| vec![false; c.requesters.len()])
        .collect();
    let mut estimates: Vec<u64> = vec![1; m];
    let mut versions: Vec<u32> = vec![0; m];
    let mut pending: usize = scn.contents.iter().map(|c| c.requesters.len()).sum();
    let mut queue: BinaryHeap<Event> = BinaryHeap::new();

    let aggregate = |scn: &Scenario, holders: &[Vec<u32>], c: usize, j: u32| -> f64 {
        holders[c].iter().map(|&i| scn.weight(i, j)).sum()
    };
    for (c, content) in scn.contents.iter().enumerate() {
        for (ri, &j) in content.requesters.iter().enumerate() {
            let rate = aggregate(&scn, &holders, c, j);
            if rate > 0.0 {
                let u: f64 = rng.random();
                queue.push(Event {
                    time: -(1.0 - u).ln() / rate,
                    content: c as u32,
                    req_idx: ri as u32,
                    version: 0,
                });
            }
        }
    }

    let mut records = Vec::new();
    let mut trajectory = Vec::new();
    let mut deliveries = 0u64;

    while let Some(ev) = queue.pop() {
        if ev.time > horizon || pending == 0 {
            break;
        }
        let c = ev.content as usize;
        if ev.version != versions[c] || served[c][ev.req_idx as usize] {
            continue;
        }
        served[c][ev.req_idx as usize] = true;
        pending -= 1;
        deliveries += 1;
        estimates[c] += 1;
        records.push(DeliveryRecord {
            content: scn.contents[c].id,
            popularity: scn.contents[c].popularity(),
            requester: scn.contents[c].requesters[ev.req_idx as usize],
            replication: rep,
            outcome: Outcome::Delivered { delay: ev.time },
        });
        trajectory.push(TrajectoryPoint {
            replication: rep,
            time: ev.time,
            deliveries,
        });

        if deliveries.is_multiple_of(update_every) && pending > 0 {
            reallocate(
                &scn,
                &mut holders,
                &estimates,
                budget,
                &mut versions,
                &served,
                ev.time,
                &mut queue,
                &mut rng,
            );
        }
    }

    for (c, content) in scn.contents.iter().enumerate() {
        for (ri, &j) in content.requesters.iter().enumerate() {
            if !served[c][ri] {
                records.push(DeliveryRecord {
                    content: content.id,
                    popularity: content.popularity(),
                    requester: j,
                    replication: rep,
                    outcome: Outcome::Censored { horizon },
                });
            }
        }
    }
    Ok((records, trajectory, estimates))
}

/// Re-run the square-root allocation over the current estimates, release
/// most-recently-added holders first on shrink, add uniform eligible nodes
/// on growth, and refresh the delivery clocks of affected contents.
#[allow(clippy::too_many_arguments)]
fn reallocate(
    scn: &Scenario,
    holders: &mut [Vec<u32>],
    estimates: &[u64],
    budget: f64,
    versions: &mut [u32],
    served: &[Vec<bool>],
    now: f64,
    queue: &mut BinaryHeap<Event>,
    rng: &mut impl Rng,
) {
    let mean_sqrt: f64 =
        estimates.iter().map(|&e| (e as f64).sqrt()).sum::<f64>() / estimates.len() as f64;
    let norm = budget / mean_sqrt;
    for c in 0..holders.len() {
        let content = &scn.contents[c];
        let cap = scn.n_nodes - content.popularity();
        let target = round_randomized(norm * (estimates[c] as f64).sqrt(), rng).min(cap);
        let current = holders[c].len() as u32;
        if target == current {
            continue;
        }
        while (holders[c].len() as u32) > target {
            holders[c].pop();
        }
        while (holders[c].len() as u32) < target {
            let candidate = rng.random_range(0..scn.n_nodes);
            if !content.requesters.contains(&candidate) && !holders[c].contains(&candidate) {
                holders[c].push(candidate);
            }
        }
        versions[c] += 1;
        for (ri, &j) in content.requesters.iter().enumerate() {
            if served[c][ri] {
                continue;
            }
            let rate: f64 = holders[c].iter().map(|&i| scn.weight(i, j)).sum();
            if rate > 0.0 {
                let u: f64 = rng.random();
                queue.push(Event {
                    time: now + -(1.0 - u).ln() / rate,
                    content: c as u32,
                    req_idx: ri as u32,
                    version: versions[c],
                });
            }
        }
    }
}

fn round_randomized(x: f64, rng: &mut impl Rng) -> u32 {
    let floor = x.floor();
    floor as u32 + u32::from(rng.random::<f64>() < x - floor)
}
