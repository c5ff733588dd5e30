//! Parametric models for contact rates, content popularity, and the
//! availability–popularity coupling.

mod availability;
mod popularity;
mod rate;

pub use availability::{availability_mean, availability_pmf, AvailabilityRule, RhoFn};
pub use popularity::{popularity_pmf, PopularityFamily, PopularityModel};
pub use rate::{rate_moments, sample_rates, ContactLaw, RateDist, RateModel, RateSampler};
