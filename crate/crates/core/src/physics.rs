//! Closed-form correlation for the average Nusselt number of liquid-sodium
//! flow in rectangular miniature heat sinks.
//!
//! The chain is `gamma -> Pe* -> Nu* -> Nu_ave`:
//!
//! - `gamma = alpha^0.35 / (L/Dh)^0.1`
//! - `Pe* = Pe * gamma`
//! - `Nu* = c0 + c1*gamma - c2*gamma^2`
//! - `Nu_ave = Nu* * (1 + pe_coeff * (Pe*)^pe_exp)`
//!
//! The correlation doubles as the physics oracle inside the PINN loss, as
//! the ground truth of the synthetic data generator, and as the
//! physics-only baseline in benchmarks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validated input envelope: aspect ratio, length-to-diameter ratio, Peclet.
pub const ALPHA_ENVELOPE: (f64, f64) = (0.143, 1.0);
pub const L_OVER_D_ENVELOPE: (f64, f64) = (75.0, 150.0);
pub const PE_ENVELOPE: (f64, f64) = (3.9, 163.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("correlation produced a non-positive Nusselt number ({0})")]
    NegativePrediction(f64),
}

/// Coefficients of the correlation. All seven are configurable so that a
/// perturbed variant can stand in for a different fluid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub alpha_exp: f64,
    pub ld_exp: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub pe_coeff: f64,
    pub pe_exp: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        PhysicsParams {
            alpha_exp: 0.35,
            ld_exp: 0.1,
            c0: 0.164,
            c1: 10.2,
            c2: 12.0,
            pe_coeff: 0.135,
            pe_exp: 0.388,
        }
    }
}

impl PhysicsParams {
    /// Perturbed coefficients emulating a related-but-different fluid
    /// (water analog) for transfer-learning experiments.
    pub fn water_analog() -> Self {
        PhysicsParams {
            c0: 0.3,
            c1: 8.0,
            pe_exp: 0.45,
            ..PhysicsParams::default()
        }
    }
}

/// Full evaluation of the correlation chain at one input point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsEval {
    pub gamma: f64,
    pub pe_star: f64,
    pub nu_star: f64,
    pub nu_ave_hat: f64,
    /// False when any input leaves the validated envelope; callers should
    /// surface this as a range warning rather than an error.
    pub in_envelope: bool,
}

/// `gamma = alpha^alpha_exp / (L/Dh)^ld_exp`.
pub fn gamma(alpha: f64, l_over_d: f64, p: &PhysicsParams) -> Result<f64, PhysicsError> {
    if !(alpha > 0.0) || !(l_over_d > 0.0) {
        return Err(PhysicsError::Domain(format!(
            "gamma needs alpha > 0 and L/D > 0, got alpha={alpha}, L/D={l_over_d}"
        )));
    }
    Ok(alpha.powf(p.alpha_exp) / l_over_d.powf(p.ld_exp))
}

/// `Nu* = c0 + c1*g - c2*g^2`.
pub fn nu_star(g: f64, p: &PhysicsParams) -> f64 {
    p.c0 + p.c1 * g - p.c2 * g * g
}

/// Evaluates the whole chain, reporting the intermediate quantities and
/// whether the inputs sit inside the validated envelope.
pub fn evaluate(
    alpha: f64,
    l_over_d: f64,
    pe: f64,
    p: &PhysicsParams,
) -> Result<PhysicsEval, PhysicsError> {
    if pe < 0.0 {
        return Err(PhysicsError::Domain(format!(
            "Peclet number must be non-negative, got {pe}"
        )));
    }
    let g = gamma(alpha, l_over_d, p)?;
    let pe_star = pe * g;
    let ns = nu_star(g, p);
    let nu = ns * (1.0 + p.pe_coeff * pe_star.powf(p.pe_exp));
    let in_envelope = (ALPHA_ENVELOPE.0..=ALPHA_ENVELOPE.1).contains(&alpha)
        && (L_OVER_D_ENVELOPE.0..=L_OVER_D_ENVELOPE.1).contains(&l_over_d)
        && (PE_ENVELOPE.0..=PE_ENVELOPE.1).contains(&pe);
    Ok(PhysicsEval {
        gamma: g,
        pe_star,
        nu_star: ns,
        nu_ave_hat: nu,
        in_envelope,
    })
}

/// Predicted average Nusselt number; errors when the prediction is not
/// positive (reachable only outside the envelope).
pub fn nu_ave_hat(
    alpha: f64,
    l_over_d: f64,
    pe: f64,
    p: &PhysicsParams,
) -> Result<f64, PhysicsError> {
    let eval = evaluate(alpha, l_over_d, pe, p)?;
    if eval.nu_ave_hat <= 0.0 {
        return Err(PhysicsError::NegativePrediction(eval.nu_ave_hat));
    }
    Ok(eval.nu_ave_hat)
}
