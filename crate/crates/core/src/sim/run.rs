//! Static-protocol simulation under exponential, Pareto, and
//! piecewise-temporal contact processes.
//!
//! Requests are issued at t = 0. For exponential contacts the residual to
//! the next meeting of a pair is Exp(λ_ij) by memorylessness, and for
//! Pareto renewal processes the stationary residual is Pareto(α_ij, t0)
//! with closed inverse cdf, so per-pair delays are sampled directly rather
//! than through explicit contact streams. The temporal variant walks the
//! alternating-window hazard explicitly.

use crate::error::SimError;
use crate::models::ContactLaw;
use crate::rng::{derive_rng, salt};
use crate::sim::metrics::{DeliveryRecord, Outcome};
use crate::sim::scenario::{Protocol, Scenario};
use rand::Rng;
use rayon::prelude::*;

/// First meeting time of a pair from t = 0 under the given law.
#[inline]
fn residual(law: ContactLaw, weight: f64, rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random(); // [0, 1)
    match law {
        // -ln(1-u)/λ, with 1-u in (0, 1]
        ContactLaw::Exponential => -(1.0 - u).ln() / weight,
        // t0·(u^{-1/α} − 1); weight is the pairwise shape α
        ContactLaw::ParetoRenewal { t0 } => t0 * ((1.0 - u).powf(-1.0 / weight) - 1.0),
    }
}

/// Simulate every (content, requester) delivery under the static protocol.
/// Records beyond `horizon` are censored at `horizon`.
pub fn simulate_static(
    scn: &Scenario,
    replications: u32,
    horizon: f64,
    seed: u64,
) -> Result<Vec<DeliveryRecord>, SimError> {
    scn.validate()?;
    if !matches!(scn.protocol, Protocol::Static) {
        return Err(SimError::ProtocolMismatch {
            expected: "static",
            actual: scn.protocol.name(),
        });
    }
    if scn.second_window.is_some() {
        return Err(SimError::Unsupported(
            "scenario has temporal windows; use simulate_temporal".into(),
        ));
    }
    check_horizon(horizon)?;
    let law = scn.contact_law;
    Ok(run_replications(scn, replications, seed, move |scn, c, rng| {
        let content = &scn.contents[c];
        content
            .requesters
            .iter()
            .map(|&j| {
                let delay = content
                    .holders
                    .iter()
                    .map(|&i| residual(law, scn.weight(i, j), rng))
                    .fold(f64::INFINITY, f64::min);
                (j, delay)
            })
            .collect()
    }, horizon))
}

/// Static delivery with two alternating rate windows of equal length:
/// windows [0, W), [W, 2W), ... use Λ¹, Λ², Λ¹, ... respectively.
pub fn simulate_temporal(
    scn: &Scenario,
    replications: u32,
    horizon: f64,
    seed: u64,
) -> Result<Vec<DeliveryRecord>, SimError> {
    scn.validate()?;
    if !matches!(scn.protocol, Protocol::Static) {
        return Err(SimError::ProtocolMismatch {
            expected: "static",
            actual: scn.protocol.name(),
        });
    }
    let Some(second) = &scn.second_window else {
        return Err(SimError::Unsupported(
            "simulate_temporal needs a second rate window".into(),
        ));
    };
    check_horizon(horizon)?;
    let window = second.window;
    Ok(run_replications(scn, replications, seed, move |scn, c, rng| {
        let second = scn.second_window.as_ref().expect("checked");
        let content = &scn.contents[c];
        content
            .requesters
            .iter()
            .map(|&j| {
                let delay = content
                    .holders
                    .iter()
                    .map(|&i| {
                        let l1 = scn.weight(i, j);
                        let l2 = second.weights.get(scn.n_nodes, i, j);
                        piecewise_first_arrival(l1, l2, window, horizon, rng)
                    })
                    .fold(f64::INFINITY, f64::min);
                (j, delay)
            })
            .collect()
    }, horizon))
}

/// First arrival of a Poisson process whose rate alternates λ1/λ2 every
/// `window`, by inverting the piecewise-linear cumulative hazard. Returns
/// +inf once the search passes `beyond`.
fn piecewise_first_arrival(
    lambda1: f64,
    lambda2: f64,
    window: f64,
    beyond: f64,
    rng: &mut impl Rng,
) -> f64 {
    let u: f64 = rng.random();
    let mut target = -(1.0 - u).ln();
    let mut t = 0.0;
    let mut odd = false;
    loop {
        let rate = if odd { lambda2 } else { lambda1 };
        let capacity = rate * window;
        if target <= capacity {
            return t + target / rate;
        }
        target -= capacity;
        t += window;
        odd = !odd;
        if t > beyond {
            return f64::INFINITY;
        }
    }
}

fn check_horizon(horizon: f64) -> Result<(), SimError> {
    if horizon > 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(SimError::InvalidScenario(format!(
            "censoring horizon must be finite and > 0, got {horizon}"
        )))
    }
}

/// Shared replication harness: per (replication, content) streams, records
/// assembled in deterministic order regardless of the thread schedule.
fn run_replications(
    scn: &Scenario,
    replications: u32,
    seed: u64,
    per_content: impl Fn(&Scenario, usize, &mut rand_chacha::ChaCha8Rng) -> Vec<(u32, f64)>
        + Sync,
    horizon: f64,
) -> Vec<DeliveryRecord> {
    let n_contents = scn.contents.len() as u64;
    (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut records = Vec::new();
            for c in 0..scn.contents.len() {
                let mut rng = derive_rng(
                    seed,
                    salt::REPLICATION,
                    u64::from(rep) * n_contents + c as u64,
                );
                let popularity = scn.contents[c].popularity();
                for (requester, delay) in per_content(scn, c, &mut rng) {
                    records.push(DeliveryRecord {
                        content: scn.contents[c].id,
                        popularity,
                        requester,
                        replication: rep,
                        outcome: if delay <= horizon {
                            Outcome::Delivered { delay }
                        } else {
                            Outcome::Censored { horizon }
                        },
                    });
                }
            }
            records
        })
        .flatten()
        .collect()
}
