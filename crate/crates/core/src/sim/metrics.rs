//! Delivery records and metric estimation.

use crate::error::SimError;
use crate::numerics::{RunningMoments, Z95};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Outcome of one (content, requester, replication) delivery attempt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    Delivered { delay: f64 },
    /// Still undelivered when the observation window closed.
    Censored { horizon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeliveryRecord {
    pub content: u32,
    /// N_p of the content, carried for per-class breakdowns.
    pub popularity: u32,
    pub requester: u32,
    pub replication: u32,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl DeliveryRecord {
    pub fn delay(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Delivered { delay } => Some(delay),
            Outcome::Censored { .. } => None,
        }
    }
}

/// Mean delay over uncensored records, or a lower bound when everything was
/// censored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeanDelay {
    Estimated {
        mean: f64,
        /// Half-width of the 95% normal interval.
        ci_half: f64,
        uncensored: u64,
    },
    AtLeast { horizon: f64 },
}

impl MeanDelay {
    pub fn mean(&self) -> Option<f64> {
        match self {
            MeanDelay::Estimated { mean, .. } => Some(*mean),
            MeanDelay::AtLeast { .. } => None,
        }
    }

    pub fn ci_half(&self) -> Option<f64> {
        match self {
            MeanDelay::Estimated { ci_half, .. } => Some(*ci_half),
            MeanDelay::AtLeast { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessEstimate {
    pub ttl: f64,
    pub probability: f64,
    pub ci_half: f64,
}

/// Per-popularity-class summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub popularity: u32,
    pub records: u64,
    pub uncensored: u64,
    pub mean_delay: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub records: u64,
    pub replications: u32,
    pub mean_delay: MeanDelay,
    pub censored_fraction: f64,
    pub access: Vec<AccessEstimate>,
    pub by_popularity: Vec<ClassStats>,
}

/// Estimate mean delay and access probabilities from raw records.
///
/// Censored records count as "later than any requested ttl": every ttl must
/// therefore sit at or below the smallest censoring horizon present.
pub fn estimate_metrics(
    records: &[DeliveryRecord],
    ttls: &[f64],
) -> Result<MetricsReport, SimError> {
    if records.is_empty() {
        return Err(SimError::NoRecords);
    }
    let total = records.len() as u64;
    let mut delays = RunningMoments::default();
    let mut min_censor_horizon = f64::INFINITY;
    let mut censored = 0u64;
    let mut reps: Vec<u32> = Vec::new();
    let mut classes: BTreeMap<u32, (u64, RunningMoments)> = BTreeMap::new();

    for r in records {
        reps.push(r.replication);
        let class = classes.entry(r.popularity).or_default();
        class.0 += 1;
        match r.outcome {
            Outcome::Delivered { delay } => {
                delays.push(delay);
                class.1.push(delay);
            }
            Outcome::Censored { horizon } => {
                censored += 1;
                min_censor_horizon = min_censor_horizon.min(horizon);
            }
        }
    }
    reps.sort_unstable();
    reps.dedup();

    for &ttl in ttls {
        if censored > 0 && ttl > min_censor_horizon {
            return Err(SimError::TtlBeyondHorizon {
                ttl,
                horizon: min_censor_horizon,
            });
        }
    }

    let mean_delay = if delays.count() == 0 {
        MeanDelay::AtLeast {
            horizon: min_censor_horizon,
        }
    } else {
        MeanDelay::Estimated {
            mean: delays.mean(),
            ci_half: Z95 * delays.std_error(),
            uncensored: delays.count(),
        }
    };

    let access = ttls
        .iter()
        .map(|&ttl| {
            let hits = records
                .iter()
                .filter(|r| r.delay().is_some_and(|d| d <= ttl))
                .count() as f64;
            let p = hits / total as f64;
            AccessEstimate {
                ttl,
                probability: p,
                ci_half: Z95 * (p * (1.0 - p) / total as f64).sqrt(),
            }
        })
        .collect();

    let by_popularity = classes
        .into_iter()
        .map(|(popularity, (count, m))| ClassStats {
            popularity,
            records: count,
            uncensored: m.count(),
            mean_delay: (m.count() > 0).then(|| m.mean()),
        })
        .collect();

    Ok(MetricsReport {
        records: total,
        replications: reps.len() as u32,
        mean_delay,
        censored_fraction: censored as f64 / total as f64,
        access,
        by_popularity,
    })
}
