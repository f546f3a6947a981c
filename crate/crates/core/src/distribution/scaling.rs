//! Scaling degree: regression estimate and the composition rules.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Distribution, DistributionKind, Probe};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::series::least_squares;

/// r² a probe needs for its slope to count at all.
pub const MIN_R2: f64 = 0.9;
/// r² behind the `confident` flag.
pub const CONFIDENT_R2: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// Decreasing scale factors; empty for the exact shortcut.
    pub lambda_grid: Vec<f64>,
    /// `samples[p][i] = T_{λ_i}[φ_p]`
    pub samples: Vec<Vec<f64>>,
    /// Negative log-log slope per probe (NaN where no fit was possible).
    pub probe_degrees: Vec<f64>,
    pub probe_r2: Vec<f64>,
    pub fitted_degree: f64,
    pub regression_r2: f64,
    pub confident: bool,
    pub probe_count: usize,
    /// True when the degree came from the closed form, not from sampling.
    pub exact: bool,
}

/// Fits `log|T_λ[φ]|` against `log λ` per probe and takes the largest
/// negative slope among probes whose fit reaches r² ≥ 0.9. A pure
/// `∂^α δ` returns `n + |α|` without sampling.
pub fn estimate_scaling_degree(
    t: &Distribution,
    probes: &[&dyn Probe],
    lambda_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScalingReport> {
    if probes.len() < 2 {
        return Err(Error::invalid("scaling-degree estimate needs at least two probes"));
    }
    if lambda_grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) || lambda_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("λ grid must be positive and strictly decreasing"));
    }
    match (lambda_grid.first(), lambda_grid.last()) {
        (Some(&hi), Some(&lo)) if hi / lo >= 100.0 => {}
        _ => return Err(Error::invalid("λ grid must span at least two decades")),
    }
    if let DistributionKind::DeltaTerm { alpha, .. } = t.kind() {
        return Ok(ScalingReport {
            lambda_grid: Vec::new(),
            samples: Vec::new(),
            probe_degrees: Vec::new(),
            probe_r2: Vec::new(),
            fitted_degree: (t.dim() + alpha.order()) as f64,
            regression_r2: 1.0,
            confident: true,
            probe_count: probes.len(),
            exact: true,
        });
    }

    let mut samples = Vec::with_capacity(probes.len());
    for phi in probes {
        let mut row = Vec::with_capacity(lambda_grid.len());
        for &lam in lambda_grid {
            row.push(t.scale(lam)?.apply(*phi, cfg)?);
        }
        samples.push(row);
    }

    let mut probe_degrees = Vec::with_capacity(probes.len());
    let mut probe_r2 = Vec::with_capacity(probes.len());
    for row in &samples {
        let pts: Vec<(f64, f64)> = lambda_grid
            .iter()
            .zip(row)
            .filter(|(_, v)| v.is_finite() && **v != 0.0)
            .map(|(l, v)| (l.ln(), v.abs().ln()))
            .collect();
        if pts.len() < 3 {
            probe_degrees.push(f64::NAN);
            probe_r2.push(0.0);
            continue;
        }
        let (slope, intercept) = least_squares(&pts);
        probe_degrees.push(-slope);
        probe_r2.push(r_squared(&pts, slope, intercept));
    }

    let best = probe_degrees
        .iter()
        .zip(&probe_r2)
        .filter(|(_, r2)| **r2 >= MIN_R2)
        .fold(None, |acc: Option<(f64, f64)>, (&d, &r2)| match acc {
            Some((bd, _)) if bd >= d => acc,
            _ => Some((d, r2)),
        });
    match best {
        Some((fitted_degree, regression_r2)) => Ok(ScalingReport {
            lambda_grid: lambda_grid.to_vec(),
            samples,
            probe_degrees,
            probe_r2,
            fitted_degree,
            regression_r2,
            confident: regression_r2 >= CONFIDENT_R2,
            probe_count: probes.len(),
            exact: false,
        }),
        None => Err(Error::Inconclusive {
            best_r2: probe_r2.iter().copied().fold(0.0, f64::max),
            samples,
        }),
    }
}

fn r_squared(pts: &[(f64, f64)], slope: f64, intercept: f64) -> f64 {
    let n = pts.len() as f64;
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let scale = pts.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
    // a flat line (degree 0) fits perfectly but has no variance to explain
    if ss_tot <= 1e-24 * scale * scale * n {
        return if ss_res <= 1e-24 * scale * scale * n { 1.0 } else { 0.0 };
    }
    1.0 - ss_res / ss_tot
}

/// How a distribution was built from ones of known degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdOperation {
    /// `∂^α T` with `|α|` given
    Derivative(u32),
    /// `x^α T` with `|α|` given
    MultiplyMonomial(u32),
    /// `T₁ + T₂ + …`
    Sum,
}

/// Upper bound on the scaling degree after `op`.
pub fn sd_calculus(known: &[f64], op: SdOperation) -> Result<f64> {
    if known.iter().any(|d| d.is_nan()) {
        return Err(Error::invalid("scaling degrees must not be NaN"));
    }
    match op {
        SdOperation::Derivative(k) | SdOperation::MultiplyMonomial(k) => {
            let [d] = known else {
                return Err(Error::invalid("unary rule needs exactly one degree"));
            };
            Ok(if matches!(op, SdOperation::Derivative(_)) {
                d + k as f64
            } else {
                d - k as f64
            })
        }
        SdOperation::Sum => known
            .iter()
            .copied()
            .reduce(f64::max)
            .ok_or_else(|| Error::invalid("sum rule needs at least one degree")),
    }
}

/// Scaling degree of the Feynman propagator in `n` dimensions: from
/// `□G = δ`, `sd(G) + 2 = sd(δ) = n`.
pub fn propagator_sd(n: usize) -> f64 {
    n as f64 - 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{Kernel, MultiIndex, TestFunction};

    fn dyadic() -> Vec<f64> {
        (0..=10).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn delta_degree_is_exact() {
        let p1 = TestFunction::mollifier(4, 0.0, 1.0).unwrap();
        let p2 = TestFunction::mollifier(4, 0.0, 2.0).unwrap();
        let d = Distribution::delta(4).unwrap();
        let r = estimate_scaling_degree(&d, &[&p1, &p2], &dyadic(), &QuadratureConfig::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.fitted_degree, 4.0);
        let d2 = Distribution::delta_derivative(MultiIndex::new(alloc::vec![2, 0, 0, 0]), 1.0).unwrap();
        let r = estimate_scaling_degree(&d2, &[&p1, &p2], &dyadic(), &QuadratureConfig::default()).unwrap();
        assert_eq!(r.fitted_degree, 6.0);
    }

    #[test]
    fn constant_kernel_has_degree_zero() {
        let p1 = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
        let p2 = TestFunction::mollifier(1, 0.5, 1.0).unwrap();
        let one = Distribution::regular(1, Kernel::Constant(1.0)).unwrap();
        let r = estimate_scaling_degree(&one, &[&p1, &p2], &dyadic(), &QuadratureConfig::default()).unwrap();
        assert!(r.fitted_degree.abs() < 1e-10);
        assert!(r.confident);
    }

    #[test]
    fn grid_and_probe_preconditions() {
        let p = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
        let d = Distribution::delta(1).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(estimate_scaling_degree(&d, &[&p], &dyadic(), &cfg).is_err());
        assert!(estimate_scaling_degree(&d, &[&p, &p], &[1.0, 0.5, 0.25], &cfg).is_err());
        assert!(estimate_scaling_degree(&d, &[&p, &p], &[0.01, 1.0], &cfg).is_err());
    }

    #[test]
    fn saturating_samples_are_inconclusive() {
        // a narrow Gaussian seen by probes away from 0 switches on abruptly as λ shrinks
        let g = Distribution::regular(1, Kernel::Gaussian { width: 0.05 }).unwrap();
        let p1 = TestFunction::mollifier(1, 1.0, 0.5).unwrap();
        let p2 = TestFunction::mollifier(1, -2.0, 1.0).unwrap();
        let err = estimate_scaling_degree(&g, &[&p1, &p2], &dyadic(), &QuadratureConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Inconclusive { ref samples, best_r2 } if samples.len() == 2 && best_r2 < 0.9));
    }

    #[test]
    fn calculus_rules() {
        assert_eq!(propagator_sd(4), 2.0);
        assert_eq!(sd_calculus(&[1.0, 4.0], SdOperation::Sum).unwrap(), 4.0);
        assert_eq!(sd_calculus(&[2.0], SdOperation::Derivative(2)).unwrap(), 4.0);
        assert_eq!(sd_calculus(&[6.0], SdOperation::MultiplyMonomial(2)).unwrap(), 4.0);
        assert!(sd_calculus(&[1.0, 2.0], SdOperation::Derivative(1)).is_err());
        assert!(sd_calculus(&[], SdOperation::Sum).is_err());
    }
}
