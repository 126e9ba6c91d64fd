use serde::Serialize;

use super::eulerian::eulerian_eval;
use crate::error::{Error, Result};

/// `c(κ) = 6(κ^κ + 1)`.
pub fn c_kappa(kappa: f64) -> f64 {
    6.0 * (kappa.powf(kappa) + 1.0)
}

/// `c(κ, K) = c(κ) K (2^{κ-1} + 1)`.
pub fn c_kappa_k(kappa: f64, k: f64) -> f64 {
    c_kappa(kappa) * k * (2f64.powf(kappa - 1.0) + 1.0)
}

/// `None` when `(y, t)` violates the premise `y ≥ 2`, `t ≥ e`, `y / log^κ y ≤ t`;
/// otherwise whether `y ≤ c(κ) t log^κ t`.
pub fn y_to_t_check(t: f64, kappa: f64, y: f64) -> Option<bool> {
    if y < 2.0 || t < std::f64::consts::E || y / y.ln().powf(kappa) > t {
        return None;
    }
    Some(y <= c_kappa(kappa) * t * t.ln().powf(kappa))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExplicitConstant {
    pub ell: f64,
    pub kappa: f64,
    pub k: f64,
    pub value: f64,
    /// `(2/(ℓ-2))^κ` for `2 < ℓ < 3`, the factor that blows up at the endpoint.
    pub blowup_factor: Option<f64>,
}

/// The explicit bound for `U^{-ℓ} Σ_b |S(b)|^ℓ`: `γ = 2` when `ℓ ≥ 3`, and the
/// simplified form of `γ = e^{1/(ℓ-2)}` when `2 < ℓ < 3`.
pub fn explicit_constant(ell: f64, kappa: f64, k: f64) -> Result<ExplicitConstant> {
    if !(ell > 2.0) || !ell.is_finite() {
        return Err(Error::Parameter(format!("ℓ must exceed 2, got {ell}")));
    }
    if !(kappa > 0.0) || !(k > 0.0) {
        return Err(Error::Parameter(format!("need κ > 0 and K > 0, got κ = {kappa}, K = {k}")));
    }
    let n = kappa.floor() as usize + 1;
    let ckk = c_kappa_k(kappa, k);
    let log_term = (2.0 * k).ln().powf(kappa);
    let (value, blowup_factor) = if ell >= 3.0 {
        let g = 2f64.powf(2.0 - ell);
        let tail = (2.0 * 2f64.ln()).powf(kappa) * g * eulerian_eval(n, g) / (1.0 - g).powi(n as i32 + 1);
        (ckk * (log_term / (1.0 - g) + tail), None)
    } else {
        let e = std::f64::consts::E;
        let factor = (2.0 / (ell - 2.0)).powf(kappa);
        let tail = factor * e.powi(n as i32) / (e - 1.0).powi(n as i32 + 1) * eulerian_eval(n, 1.0 / e);
        (ckk * (log_term * e / (e - 1.0) + tail), Some(factor))
    };
    if !value.is_finite() {
        return Err(Error::Blowup { ell });
    }
    Ok(ExplicitConstant { ell, kappa, k, value, blowup_factor })
}
