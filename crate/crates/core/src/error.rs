//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or querying the probability models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A requested moment does not exist (e.g. Pareto variance with shape <= 2).
    #[error("infinite moment: {0}")]
    InfiniteMoment(String),
    /// Popularity value outside the model's support.
    #[error("popularity value {0} outside the model support")]
    OutsideSupport(u32),
    #[error("probability mass function does not normalize: total {0}")]
    NotNormalized(f64),
}

/// Errors raised by the analytic predictors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A Monte Carlo expectation was requested at a non-integer holder count.
    #[error("Monte Carlo aggregate law requires integer holder counts, got {0}")]
    NonIntegerHolders(f64),
}

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("sampled popularity + availability exceeded {nodes} nodes {attempts} times in a row")]
    PlacementRetriesExhausted { nodes: u32, attempts: u32 },
    #[error("no delivery records")]
    NoRecords,
    #[error("ttl {ttl} exceeds the censoring horizon {horizon} of some records")]
    TtlBeyondHorizon { ttl: f64, horizon: f64 },
    #[error("operation requires protocol {expected}, scenario uses {actual}")]
    ProtocolMismatch {
        expected: &'static str,
        actual: &'static str,
    },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

/// Errors raised by the allocation policies and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OffloadError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Bisection on the budget constraint failed to bracket or converge.
    #[error("multiplier search did not converge after {iterations} iterations; bracket [{low}, {high}], budgets [{budget_high}, {budget_low}]")]
    NoConvergence {
        iterations: u32,
        low: f64,
        high: f64,
        budget_low: f64,
        budget_high: f64,
    },
    #[error("policy has zero normalizer on this popularity support: {0}")]
    ZeroNormalizer(String),
}
