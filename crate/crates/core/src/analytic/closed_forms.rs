//! Closed-form metrics for the Gamma-rates / continuous-Pareto-popularity
//! case study: P_p ~ Pareto(n0, shape 2) on [n0, ∞), f_λ ~ Gamma(μ, CV).
//!
//! Row one assumes ρ(n) = c·n and gives the expected delay; row two assumes
//! ρ(n) = c·ln(n) and gives the access probability by a deadline. These are
//! exposed verbatim rather than derived from the generic path because the
//! popularity model here is continuous and unbounded, unlike the discrete
//! bounded families elsewhere.

use crate::error::AnalyticError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormMetrics {
    /// E[T] for ρ(n) = c·n.
    pub delay: f64,
    /// P{T ≤ ttl} for ρ(n) = c·ln(n).
    pub probability: f64,
    /// γ = (1 + μ·CV²·ttl)^{c/CV²}, reported for diagnostics.
    pub gamma_factor: f64,
}

pub fn closed_form_metrics(
    c: f64,
    n0: f64,
    mu: f64,
    cv: f64,
    ttl: f64,
) -> Result<ClosedFormMetrics, AnalyticError> {
    let pre = |cond: bool, msg: &str| {
        if cond {
            Ok(())
        } else {
            Err(AnalyticError::Precondition(msg.to_string()))
        }
    };
    pre(c > 0.0, "allocation factor c must be > 0")?;
    pre(n0 >= 1.0, "Pareto scale n0 must be >= 1")?;
    pre(mu > 0.0, "mean contact rate must be > 0")?;
    pre(cv > 0.0, "CV_λ must be > 0 for the closed forms")?;
    pre(ttl >= 0.0, "ttl must be >= 0")?;

    let cv2 = cv * cv;
    let ratio = cv2 / (c * n0);
    if ratio >= 1.0 {
        return Err(AnalyticError::Precondition(format!(
            "delay row requires CV²/(c·n0) < 1, got {ratio}"
        )));
    }
    let delay = 1.0 / (mu * cv2) * ((c * n0 / cv2) * (1.0 / (1.0 - ratio)).ln() - 1.0);

    let gamma_factor = (1.0 + mu * cv2 * ttl).powf(c / cv2);
    if gamma_factor <= 1.0 {
        return Err(AnalyticError::Precondition(format!(
            "probability row requires γ > 1, got {gamma_factor} (is ttl > 0?)"
        )));
    }
    let probability = 1.0 - 1.0 / ((1.0 + gamma_factor.ln()) * gamma_factor.powf(n0.ln()));

    Ok(ClosedFormMetrics {
        delay,
        probability,
        gamma_factor,
    })
}
