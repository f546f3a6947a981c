//! Borel–Padé resummation.
//!
//! The Borel transform `g(t) = Σ a_n tⁿ / n!` of a factorially divergent
//! series has a finite radius of convergence. A Padé approximant continues it
//! beyond that disk, and the Laplace integral `∫₀^∞ g(λb) e^{−b} db` turns it
//! back into a finite value for the original series at coupling λ.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{poly_eval, poly_roots, Lu, Matrix};
use crate::quadrature::{integrate, QuadratureConfig, Scheme};
use crate::series::{AsymptoticSeries, SeriesCoefficient};
use crate::special::ln_factorial;

/// Hankel systems conditioned worse than this lose the highest pole.
pub const MAX_HANKEL_CONDITION: f64 = 1e12;
/// A numerator root this close to a pole marks the pole as a Froissart doublet.
pub const DOUBLET_DISTANCE: f64 = 1e-6;
/// Poles with smaller imaginary part count as lying on the real axis.
pub const REAL_AXIS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BorelTransform {
    /// `a_n / n!`, sign and log-magnitude.
    pub coefficients: Vec<SeriesCoefficient>,
    /// Ratio-test radius of convergence; `f64::INFINITY` for entire transforms.
    pub radius_estimate: f64,
}

pub fn borel_transform(series: &AsymptoticSeries) -> Result<BorelTransform> {
    if series.max_order() < 4 {
        return Err(Error::precondition("Borel transform needs max_order ≥ 4"));
    }
    let coefficients: Vec<SeriesCoefficient> = series
        .coefficients()
        .iter()
        .map(|c| SeriesCoefficient::from_log(c.index, c.sign, c.log_magnitude - ln_factorial(c.index)))
        .collect();
    let radius_estimate = ratio_test_radius(&coefficients);
    Ok(BorelTransform {
        coefficients,
        radius_estimate,
    })
}

/// Ratio test `|g_n / g_{n+1}|` over the last third of the coefficients,
/// extrapolated in 1/n. Ratios that keep growing, or a zero tail, mean the
/// transform is entire and the result is `+∞`.
fn ratio_test_radius(g: &[SeriesCoefficient]) -> f64 {
    let n = g.len() - 1;
    let start = n - (n / 3).max(2);
    let tail = &g[start..];
    if tail.iter().any(|c| c.is_zero()) {
        return f64::INFINITY;
    }
    let ratios: Vec<(f64, f64)> = tail
        .windows(2)
        .map(|w| (w[0].index as f64, (w[0].log_magnitude - w[1].log_magnitude).exp()))
        .collect();
    let first = ratios[0].1;
    let (n1, r1) = ratios[ratios.len() - 2];
    let (n2, r2) = ratios[ratios.len() - 1];
    if r2 / first >= 1.25 || !r2.is_finite() {
        return f64::INFINITY;
    }
    // r_n ≈ r∞ + b/n  ⇒  r∞ = (n2 r2 − n1 r1)/(n2 − n1)
    let extrapolated = if n1 > 0.0 { (n2 * r2 - n1 * r1) / (n2 - n1) } else { r2 };
    if extrapolated > 0.0 && extrapolated.is_finite() {
        extrapolated
    } else {
        r2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    /// Paired with a numerator root closer than [`DOUBLET_DISTANCE`].
    pub spurious: bool,
}

/// `P(t)/Q(t)` with `Q(0) = 1`.
///
/// Coefficients are kept in the scaled variable `s = t/ρ` (ρ the radius
/// estimate of the source transform) and converted on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalApproximant {
    scaled_numerator: Vec<f64>,
    scaled_denominator: Vec<f64>,
    scale: f64,
    pub poles: Vec<Pole>,
    pub zeros: Vec<Complex64>,
    /// Orders actually used after any reduction of M.
    pub order: (usize, usize),
}

impl RationalApproximant {
    pub fn numerator_coeffs(&self) -> Vec<f64> {
        unscale(&self.scaled_numerator, self.scale)
    }

    pub fn denominator_coeffs(&self) -> Vec<f64> {
        unscale(&self.scaled_denominator, self.scale)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = t / self.scale;
        horner(&self.scaled_numerator, s) / horner(&self.scaled_denominator, s)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let s = t / self.scale;
        poly_eval(&self.scaled_numerator, s).0 / poly_eval(&self.scaled_denominator, s).0
    }

    /// Non-spurious poles on the positive real axis.
    pub fn positive_axis_poles(&self) -> impl Iterator<Item = &Pole> {
        self.poles
            .iter()
            .filter(|p| !p.spurious && p.location.im.abs() < REAL_AXIS_TOLERANCE && p.location.re > 0.0)
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn unscale(c: &[f64], scale: f64) -> Vec<f64> {
    let mut p = 1.0;
    c.iter()
        .map(|&v| {
            let out = v * p;
            p /= scale;
            out
        })
        .collect()
}

/// `[L/M]` Padé approximant of the transform.
///
/// The denominator comes from the Hankel system
/// `Σ_{j=1..M} q_j c_{L+i−j} = −c_{L+i}`, i = 1..M. When that system is
/// singular or its condition number exceeds [`MAX_HANKEL_CONDITION`], M is
/// lowered by one and the solve repeated.
pub fn pade(transform: &BorelTransform, l: usize, m: usize) -> Result<RationalApproximant> {
    let available = transform.coefficients.len();
    if l + m + 1 > available {
        return Err(Error::OutOfRange {
            requested: l + m,
            available: available - 1,
        });
    }
    let scale = if transform.radius_estimate.is_finite() {
        transform.radius_estimate
    } else {
        1.0
    };
    let ln_scale = scale.ln();
    let c: Vec<f64> = transform
        .coefficients
        .iter()
        .take(l + m + 1)
        .map(|g| match g.is_zero() {
            true => 0.0,
            false => g.sign.as_f64() * (g.log_magnitude + g.index as f64 * ln_scale).exp(),
        })
        .collect();
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::PadeDegenerate);
    }
    let at = |k: isize| if k < 0 { 0.0 } else { c[k as usize] };

    let mut m_used = m;
    let q = loop {
        if m_used == 0 {
            break alloc::vec![1.0];
        }
        let a = Matrix::from_fn(m_used, |i, j| at(l as isize + i as isize - j as isize));
        let lu = Lu::new(&a);
        if !lu.is_singular() && lu.condition_number() <= MAX_HANKEL_CONDITION {
            let rhs: Vec<f64> = (1..=m_used).map(|i| -at((l + i) as isize)).collect();
            let sol = lu.solve(&rhs);
            if sol.iter().all(|v| v.is_finite()) {
                let mut q = Vec::with_capacity(m_used + 1);
                q.push(1.0);
                q.extend(sol);
                break q;
            }
        }
        m_used -= 1;
    };
    let p: Vec<f64> = (0..=l)
        .map(|i| (0..=i.min(m_used)).map(|j| q[j] * c[i - j]).sum())
        .collect();

    let zeros_scaled = poly_roots(&p);
    let poles: Vec<Pole> = poly_roots(&q)
        .into_iter()
        .map(|z| {
            let spurious = zeros_scaled
                .iter()
                .any(|r| (r - z).norm() * scale <= DOUBLET_DISTANCE * (z.norm() * scale).max(1.0));
            Pole {
                location: z * scale,
                spurious,
            }
        })
        .collect();
    Ok(RationalApproximant {
        scaled_numerator: p,
        scaled_denominator: q,
        scale,
        poles,
        zeros: zeros_scaled.into_iter().map(|z| z * scale).collect(),
        order: (l, m_used),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelDiagnostics {
    pub poles: Vec<Pole>,
    pub radius_estimate: f64,
    pub quadrature_error: f64,
    pub requested_order: (usize, usize),
    pub order_used: (usize, usize),
    pub scheme_used: Scheme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelSum {
    pub value: f64,
    pub diagnostics: BorelDiagnostics,
}

/// Borel–Padé sum at coupling λ: `∫₀^∞ R(λb) e^{−b} db` with `b = −ln s`.
///
/// Falls back to tanh-sinh on `s ∈ (0, 1)` when the configured scheme does
/// not converge.
pub fn borel_sum(series: &AsymptoticSeries, lambda: f64, l: usize, m: usize, cfg: &QuadratureConfig) -> Result<BorelSum> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("Borel sum needs λ > 0"));
    }
    let transform = borel_transform(series)?;
    let approx = pade(&transform, l, m)?;
    if let Some(p) = approx.positive_axis_poles().next() {
        return Err(Error::NonBorelSummable { pole: p.location });
    }
    let integrand = |s: f64| approx.eval(-lambda * s.ln());
    let (q, scheme_used) = match integrate(integrand, 0.0, 1.0, cfg) {
        Ok(q) => (q, cfg.scheme),
        Err(Error::Quadrature { .. }) if cfg.scheme != Scheme::TanhSinh => {
            let ts = cfg.with_scheme(Scheme::TanhSinh);
            (integrate(integrand, 0.0, 1.0, &ts)?, Scheme::TanhSinh)
        }
        Err(e) => return Err(e),
    };
    Ok(BorelSum {
        value: q.value,
        diagnostics: BorelDiagnostics {
            poles: approx.poles.clone(),
            radius_estimate: transform.radius_estimate,
            quadrature_error: q.error,
            requested_order: (l, m),
            order_used: approx.order,
            scheme_used,
        },
    })
}
