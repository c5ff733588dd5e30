//! Event-driven Monte Carlo simulation of pairwise contact processes and
//! content delivery; the independent oracle for the analytic predictors.

mod metrics;
mod multihop;
mod replay;
mod run;
mod scenario;

pub use metrics::{
    estimate_metrics, AccessEstimate, ClassStats, DeliveryRecord, MeanDelay, MetricsReport,
    Outcome,
};
pub use multihop::{simulate_multihop, MultihopOutput};
pub use replay::{replay_trace, TraceEvents};
pub use run::{simulate_static, simulate_temporal};
pub use scenario::{
    build_scenario, build_scenario_with_counts, BuildSpec, ContentSpec, HolderSelection,
    PairWeights, Protocol, Scenario, SecondWindow,
};
