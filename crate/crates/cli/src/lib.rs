//! Experiment configuration, contact-trace ingestion, orchestration, and
//! machine-readable reporting around `oppnet-core`.
//!
//! The config grammar (TOML, kebab-case keys, all sections optional with
//! documented defaults) is described in the repository README; unknown keys
//! are rejected and semantic validation reports every violation at once.

// Doc comments write expectations in bracket notation (E[T], E_p[n]),
// which rustdoc would otherwise parse as intra-doc links.
#![allow(rustdoc::broken_intra_doc_links)]
// Validation uses `!(x > 0.0)` style comparisons on purpose: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;
pub mod trace;

pub use config::{parse_config, ConfigError, ExperimentConfig, Resolved};
pub use report::{scenario_hash, ResultRecord};
pub use trace::{ingest_trace, ContactTrace, TraceError, TraceSummary};
