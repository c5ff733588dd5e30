//! Contact-trace ingestion: CSV records "t,i,j" to a dense, time-sorted
//! event log plus a fitted empirical rate model.

use oppnet_core::models::{RateDist, RateModel};
use oppnet_core::sim::TraceEvents;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: malformed record: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("trace body is empty")]
    Empty,
    #[error("trace duration is zero")]
    ZeroDuration,
}

/// A recorded contact trace with dense node ids (remapped in order of first
/// appearance; original labels retained). Timestamps are shifted so the
/// observation window starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactTrace {
    pub node_labels: Vec<String>,
    pub duration: f64,
    /// (t, a, b) sorted by t, a ≠ b, ids dense.
    pub events: Vec<(f64, u32, u32)>,
}

impl ContactTrace {
    pub fn node_count(&self) -> u32 {
        self.node_labels.len() as u32
    }

    pub fn to_events(&self) -> TraceEvents {
        TraceEvents {
            n_nodes: self.node_count(),
            duration: self.duration,
            events: self.events.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSummary {
    pub contacts: usize,
    pub nodes: u32,
    pub pairs_with_contact: usize,
    pub mean_rate: f64,
    pub rate_cv: f64,
}

/// Parse a trace and fit per-pair rates λ̂_ij = contacts / duration.
///
/// Records are comma-separated `t,i,j`; a header line is skipped when its
/// first field is not a number. Node ids may be arbitrary labels.
pub fn ingest_trace(text: &str) -> Result<(ContactTrace, RateModel, TraceSummary), TraceError> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut events: Vec<(f64, u32, u32)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(TraceError::Malformed {
                line,
                reason: format!("expected 3 comma-separated fields, got {}", fields.len()),
            });
        }
        let t: f64 = match fields[0].parse() {
            Ok(t) => t,
            Err(_) if line == 1 => continue, // header
            Err(_) => {
                return Err(TraceError::Malformed {
                    line,
                    reason: format!("timestamp \"{}\" is not a number", fields[0]),
                })
            }
        };
        if !t.is_finite() {
            return Err(TraceError::Malformed {
                line,
                reason: "timestamp is not finite".into(),
            });
        }
        let mut id_of = |label: &str| -> u32 {
            *ids.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() as u32 - 1
            })
        };
        let a = id_of(fields[1]);
        let b = id_of(fields[2]);
        if a == b {
            return Err(TraceError::Malformed {
                line,
                reason: format!("self-contact of node \"{}\"", fields[1]),
            });
        }
        events.push((t, a, b));
    }
    if events.is_empty() {
        return Err(TraceError::Empty);
    }

    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let t0 = events[0].0;
    let duration = events[events.len() - 1].0 - t0;
    if !(duration > 0.0) {
        return Err(TraceError::ZeroDuration);
    }
    for e in &mut events {
        e.0 -= t0;
    }

    let mut pair_counts: HashMap<(u32, u32), u64> = HashMap::new();
    for &(_, a, b) in &events {
        let key = if a < b { (a, b) } else { (b, a) };
        *pair_counts.entry(key).or_insert(0) += 1;
    }
    let mut rates: Vec<f64> = pair_counts
        .values()
        .map(|&c| c as f64 / duration)
        .collect();
    rates.sort_by(f64::total_cmp);

    let model = RateModel::exponential(RateDist::Empirical { values: rates });
    let (mean_rate, rate_cv) = oppnet_core::models::rate_moments(&model).expect("positive rates");
    let summary = TraceSummary {
        contacts: events.len(),
        nodes: labels.len() as u32,
        pairs_with_contact: pair_counts.len(),
        mean_rate,
        rate_cv,
    };
    Ok((
        ContactTrace {
            node_labels: labels,
            duration,
            events,
        },
        model,
        summary,
    ))
}
