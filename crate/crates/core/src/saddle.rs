//! Steepest descent for `Z(λ) = λ^{−1/2} ∫ exp(−(u² + u⁴)/λ) du`.
//!
//! The exponent `φ(u) = u² + u⁴` has three critical points: the real minimum
//! at `u = 0`, which reproduces the perturbative series, and the complex pair
//! `u = ±i/√2` with action `−1/4`, which sets the nonperturbative scale
//! `exp(−1/(4λ))`. The complex pair is reported, never added to `Z`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::toy::Estimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saddle {
    pub location: Complex64,
    /// `S = u₀² + u₀⁴`
    pub action: Complex64,
    /// `φ''(u₀) = 2 + 12 u₀²`
    pub second_derivative: Complex64,
    /// `√(2π / φ''(u₀))`, principal branch
    pub gaussian_prefactor: Complex64,
}

impl Saddle {
    fn from_square(location: Complex64, square: Complex64) -> Self {
        let action = square + square * square;
        let second_derivative = Complex64::new(2.0, 0.0) + square * 12.0;
        let gaussian_prefactor = (Complex64::new(2.0 * PI, 0.0) / second_derivative).sqrt();
        Self {
            location,
            action,
            second_derivative,
            gaussian_prefactor,
        }
    }

    /// `φ'(u₀) = 2u₀ + 4u₀³`
    pub fn derivative_residual(&self) -> f64 {
        let u = self.location;
        (u * 2.0 + u * u * u * 4.0).norm()
    }

    /// Whether the real integration contour passes through this saddle.
    pub fn on_real_contour(&self) -> bool {
        self.location.im == 0.0
    }
}

/// The critical points of `u² + u⁴`: `0` and `±i/√2`.
///
/// Actions and curvatures are evaluated from the exact square `u₀² = −1/2`
/// so that `S = −1/4` carries no rounding.
pub fn find_saddles() -> Vec<Saddle> {
    let half = Complex64::new(-0.5, 0.0);
    alloc::vec![
        Saddle::from_square(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        Saddle::from_square(Complex64::new(0.0, FRAC_1_SQRT_2), half),
        Saddle::from_square(Complex64::new(0.0, -FRAC_1_SQRT_2), half),
    ]
}

/// `|exp(−S/λ)|` with the decaying orientation, `exp(−|S|/λ)`.
pub fn nonperturbative_scale(saddle: &Saddle, lambda: f64) -> f64 {
    (-saddle.action.norm() / lambda).exp()
}

/// Leading Gaussian contribution `λ^{−1/2} e^{−S/λ} √(2πλ/φ''(u₀))`.
///
/// For saddles off the real contour the exponent is taken as `−|S|/λ`: only
/// the size of these contributions is meaningful here, their Stokes
/// multipliers are not computed.
pub fn leading_contribution(saddle: &Saddle, lambda: f64) -> Result<Complex64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("leading contribution needs λ > 0"));
    }
    if saddle.second_derivative.norm() == 0.0 {
        return Err(Error::DegenerateSaddle {
            location: saddle.location,
        });
    }
    let exponent = if saddle.on_real_contour() {
        -saddle.action / lambda
    } else {
        Complex64::new(-saddle.action.norm() / lambda, 0.0)
    };
    // λ^{-1/2} √(2πλ/φ'') = √(2π/φ''): the coupling cancels in the prefactor
    Ok(exponent.exp() * saddle.gaussian_prefactor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverOrder {
    /// `1/λ`, the order-of-magnitude estimate.
    pub k_rough: f64,
    /// Exact solution of `exp(−1/(4λ)) = λ^k`: `1/(4λ ln(1/λ))`.
    pub k_exact: f64,
}

/// Perturbative order at which terms `λ^k` fall to the nonperturbative scale.
pub fn crossover_order(lambda: f64) -> Result<CrossoverOrder> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid("crossover order needs 0 < λ < 1"));
    }
    Ok(CrossoverOrder {
        k_rough: 1.0 / lambda,
        k_exact: 1.0 / (4.0 * lambda * (1.0 / lambda).ln()),
    })
}

/// `Z(λ)` from the rescaled integral `λ^{−1/2} ∫ exp(−(u² + u⁴)/λ) du`.
pub fn z_substituted(lambda: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("z_substituted needs λ > 0"));
    }
    // u² ≥ λ ln(100/tol) puts the integrand below tol/100
    let u_max = (lambda * (100.0 / cfg.abs_tol).ln()).sqrt();
    let pre = 2.0 / lambda.sqrt();
    let inner = cfg.with_tolerances(cfg.abs_tol / pre, cfg.rel_tol);
    let q = integrate(|u| (-(u * u + u * u * u * u) / lambda).exp(), 0.0, u_max, &inner)?;
    Ok(Estimate {
        value: pre * q.value,
        error: pre * q.error + cfg.abs_tol / 100.0,
    })
}
