//! Analytical predictors and Monte Carlo simulation for content-centric
//! opportunistic networks.
//!
//! The crate is organized around four building blocks:
//!
//! * [`models`] — parametric models for pairwise contact rates, content
//!   popularity, and the availability–popularity coupling `g(m|n)`.
//! * [`analytic`] — exact predictors and Jensen bounds for content access
//!   delay and access probability, plus the multi-hop, mobility-dependent,
//!   and Pareto inter-contact extensions.
//! * [`sim`] — an event-driven contact simulator that independently
//!   validates every analytic prediction.
//! * [`offload`] — holder-allocation policies and optimizers for the mobile
//!   data offloading case study.
//!
//! All types are immutable after construction and every operation is a pure
//! function of its inputs and an explicit seed, so everything here is safe
//! for unrestricted concurrent use.

// Doc comments write expectations in bracket notation (E[T], E_p[n]),
// which rustdoc would otherwise parse as intra-doc links.
#![allow(rustdoc::broken_intra_doc_links)]
// Validation uses `!(x > 0.0)` style comparisons on purpose: unlike
// `x <= 0.0`, they also reject NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod models;
pub mod numerics;
pub mod offload;
pub mod pmf;
pub mod rng;
pub mod sim;

pub use error::{AnalyticError, ModelError, OffloadError, SimError};
pub use pmf::Pmf;
