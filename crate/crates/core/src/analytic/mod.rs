//! Exact predictors, Jensen bounds, and extensions for content access delay
//! and access probability.

mod aggregate;
mod closed_forms;
mod extensions;
mod metrics;
mod pareto;

pub use aggregate::{AggregateRateLaw, Estimate, Metric, SumFunctional, DEFAULT_MC_POOL};
pub use closed_forms::{closed_form_metrics, ClosedFormMetrics};
pub use extensions::{
    delivery_probability_with_loss, effective_rate, multihop_delay, multihop_delay_cooperation,
    multihop_delay_harmonic, multihop_delay_limited, AccessVia, EffectiveRate, LimitedSpread,
    Weighting,
};
pub use metrics::{
    access_probability_bound, access_probability_exact, expected_delay_bound,
    expected_delay_exact, request_availability, request_popularity,
    request_weighted_expectation,
};
pub use pareto::{pareto_metrics, ParetoMetrics};
