//! Ground truth for the toy partition function `Z(λ) = ∫ exp(−x² − λx⁴) dx`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// A quadrature value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Cut radius `R` with `exp(−R²) < abs_tol / 100`, unless the config fixes one.
pub fn truncation_radius(cfg: &QuadratureConfig) -> f64 {
    cfg.truncation_radius
        .unwrap_or_else(|| (100.0 / cfg.abs_tol).ln().max(1.0).sqrt())
}

/// `Z(λ)` by direct quadrature of `2∫₀^R exp(−x² − λx⁴) dx`.
///
/// The discarded tail is bounded by `2∫_R^∞ e^{−x²} ≤ e^{−R²}/R` and added
/// to the returned error estimate.
pub fn z_exact(lambda: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid("z_exact needs λ ≥ 0"));
    }
    let r = truncation_radius(cfg);
    let tail = (-r * r).exp() / r;
    let mut inner = *cfg;
    inner.abs_tol = (cfg.abs_tol - tail).max(0.5 * cfg.abs_tol) / 2.0;
    let q = integrate(|x| (-x * x - lambda * x * x * x * x).exp(), 0.0, r, &inner)?;
    Ok(Estimate {
        value: 2.0 * q.value,
        error: 2.0 * q.error + tail,
    })
}

/// `e^{x}·K_ν(x)` from `∫₀^∞ exp(−x cosh t) cosh(νt) dt`, x ≤ 700.
pub fn scaled_bessel_k(nu: f64, x: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    // integrand < exp(−x (cosh t − 1) + ν t) ≤ tol · 1e-3 beyond t_max
    let target = (1e3 / cfg.abs_tol).ln();
    let mut t_max = 1.0;
    while x * (t_max.cosh() - 1.0) - nu.abs() * t_max < target {
        t_max *= 1.25;
    }
    let q = integrate(
        |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh(),
        0.0,
        t_max,
        &cfg.with_tolerances(cfg.abs_tol * (-x).exp(), cfg.rel_tol),
    )?;
    Ok(Estimate {
        value: q.value * x.exp(),
        error: q.error * x.exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEstimate {
    pub value: f64,
    pub error: f64,
    /// Set when `1/(8λ)` is past the point where `exp(−x cosh t)` underflows
    /// and the value came from [`z_exact`] instead.
    pub fell_back: bool,
}

/// Largest `x = 1/(8λ)` for which the Bessel integrand is evaluated.
pub const BESSEL_MAX_ARGUMENT: f64 = 700.0;

/// `Z(λ) = e^{1/(8λ)} K_{1/4}(1/(8λ)) / (2√λ)`.
pub fn z_bessel(lambda: f64, cfg: &QuadratureConfig) -> Result<BesselEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("z_bessel needs λ > 0"));
    }
    let x = 1.0 / (8.0 * lambda);
    if x > BESSEL_MAX_ARGUMENT {
        let e = z_exact(lambda, cfg)?;
        return Ok(BesselEstimate {
            value: e.value,
            error: e.error,
            fell_back: true,
        });
    }
    let k = scaled_bessel_k(0.25, x, cfg)?;
    let pre = 0.5 / lambda.sqrt();
    Ok(BesselEstimate {
        value: pre * k.value,
        error: pre * k.error,
        fell_back: false,
    })
}
