//! Fundamental solutions μ₀, μ₁ of the characteristic (Ince-type) equations.

use crate::error::{require_finite, Result};
use crate::model::ModelParams;

/// μ₀, μ₁ and their analytic derivatives at time `t`.
///
/// μ₀(0) = 0, μ₀'(0) = 2a(0); μ₁(0) = 1, μ₁'(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuPair {
    pub t: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub dmu0: f64,
    pub dmu1: f64,
    pub ddmu0: f64,
    pub ddmu1: f64,
}

impl MuPair {
    /// `μ₀μ₁' − μ₁μ₀'`.
    pub fn wronskian(&self) -> f64 {
        self.mu0 * self.dmu1 - self.mu1 * self.dmu0
    }
}

pub fn mu_pair(t: f64, params: &ModelParams) -> Result<MuPair> {
    require_finite("t", t)?;
    Ok(params.model().mu_pair(t))
}

/// Wronskian from the analytic pair.
///
/// Equals `−2a(t)`: `−1 − (λ/ω)cos 2ωt` for phi0 and `−(1 − (λ/ω)sin 2ωt)` for phi90.
pub fn wronskian(t: f64, params: &ModelParams) -> Result<f64> {
    Ok(mu_pair(t, params)?.wronskian())
}

/// Residuals of the characteristic equation for μ₀ and μ₁.
pub fn ince_residual(t: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let m = mu_pair(t, params)?;
    let [p, q, r] = params.model().ince_coeffs(t);
    Ok((p * m.ddmu0 + q * m.dmu0 + r * m.mu0, p * m.ddmu1 + q * m.dmu1 + r * m.mu1))
}
