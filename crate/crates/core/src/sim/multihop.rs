//! Event-driven multi-hop dissemination: served requesters join the holder
//! set (with probability p, capped at L new holders per content).
//!
//! Pairwise contact streams are materialized lazily: a (requester, holder)
//! stream only matters until its first contact — the requester is served
//! there — and by memorylessness a stream between a pending requester and a
//! node that becomes a holder at time t restarts as Exp(λ) from t. Each
//! stream therefore contributes exactly one event to the queue.

use crate::error::SimError;
use crate::rng::{derive_rng, salt};
use crate::sim::metrics::{DeliveryRecord, Outcome};
use crate::sim::scenario::{Protocol, Scenario};
use rand::Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[inline]
fn exp_draw<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln() / rate
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Event {
    time: f64,
    requester: u32,
    holder: u32,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (time, requester, holder); the node-pair tiebreak makes
        // discrete-time ties deterministic.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.requester.cmp(&self.requester))
            .then_with(|| other.holder.cmp(&self.holder))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultihopOutput {
    pub records: Vec<DeliveryRecord>,
    /// Largest holder-set size observed for each content (over all
    /// replications); never exceeds N_a + L under a spreading limit.
    pub max_holders: Vec<u32>,
}

pub fn simulate_multihop(
    scn: &Scenario,
    replications: u32,
    horizon: f64,
    seed: u64,
) -> Result<MultihopOutput, SimError> {
    scn.validate()?;
    let Protocol::MultiHop { cooperation, limit } = scn.protocol else {
        return Err(SimError::ProtocolMismatch {
            expected: "multi-hop",
            actual: scn.protocol.name(),
        });
    };
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(SimError::InvalidScenario(format!(
            "censoring horizon must be finite and > 0, got {horizon}"
        )));
    }

    let n_contents = scn.contents.len() as u64;
    let runs: Vec<(Vec<DeliveryRecord>, Vec<u32>)> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut records = Vec::new();
            let maxima = (0..scn.contents.len())
                .map(|c| {
                    let mut rng = derive_rng(
                        seed,
                        salt::REPLICATION ^ 0xace,
                        u64::from(rep) * n_contents + c as u64,
                    );
                    run_content(
                        scn,
                        c,
                        cooperation,
                        limit,
                        horizon,
                        rep,
                        &mut rng,
                        &mut records,
                    )
                })
                .collect();
            (records, maxima)
        })
        .collect();

    let mut records = Vec::new();
    let mut max_holders = vec![0u32; scn.contents.len()];
    for (recs, maxima) in runs {
        records.extend(recs);
        for (acc, m) in max_holders.iter_mut().zip(maxima) {
            *acc = (*acc).max(m);
        }
    }
    Ok(MultihopOutput {
        records,
        max_holders,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_content(
    scn: &Scenario,
    c: usize,
    cooperation: f64,
    limit: Option<u32>,
    horizon: f64,
    rep: u32,
    rng: &mut impl Rng,
    records: &mut Vec<DeliveryRecord>,
) -> u32 {
    let content = &scn.contents[c];
    let popularity = content.popularity();
    let requesters = &content.requesters;
    let mut served: std::collections::HashMap<u32, bool> =
        requesters.iter().map(|&j| (j, false)).collect();
    let mut pending = requesters.len();
    let mut queue = BinaryHeap::with_capacity(requesters.len() * content.holders.len());

    for &j in requesters {
        for &i in &content.holders {
            queue.push(Event {
                time: exp_draw(rng, scn.weight(i, j)),
                requester: j,
                holder: i,
            });
        }
    }

    let mut holders_now = content.holders.len() as u32;
    let mut max_holders = holders_now;
    let mut joined = 0u32;

    while let Some(ev) = queue.pop() {
        if ev.time > horizon {
            break;
        }
        if served[&ev.requester] {
            continue; // stale stream
        }
        *served.get_mut(&ev.requester).unwrap() = true;
        pending -= 1;
        records.push(DeliveryRecord {
            content: content.id,
            popularity,
            requester: ev.requester,
            replication: rep,
            outcome: Outcome::Delivered { delay: ev.time },
        });
        if pending == 0 {
            break;
        }
        let may_join = limit.is_none_or(|l| joined < l);
        if may_join && rng.random::<f64>() < cooperation {
            joined += 1;
            holders_now += 1;
            max_holders = max_holders.max(holders_now);
            // open streams from every still-pending requester to the new
            // holder; iteration order over `requesters` keeps draws
            // deterministic
            for &k in requesters {
                if !served[&k] {
                    queue.push(Event {
                        time: ev.time + exp_draw(rng, scn.weight(ev.requester, k)),
                        requester: k,
                        holder: ev.requester,
                    });
                }
            }
        }
    }

    for &j in requesters {
        if !served[&j] {
            records.push(DeliveryRecord {
                content: content.id,
                popularity,
                requester: j,
                replication: rep,
                outcome: Outcome::Censored { horizon },
            });
        }
    }
    max_holders
}
