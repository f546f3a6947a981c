//! Extension by `w`-weighted Taylor subtraction plus δ-derivative counterterms.

use alloc::collections::BTreeMap;

#[allow(unused_imports)]
use num_traits::Float;

use super::cutoff::{taylor_subtract, CutoffFunction};
use crate::distribution::{origin_derivative, sign_power, Kernel, MultiIndex, Probe};
use crate::distribution::quadrature_breakpoints;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_pieces, QuadratureConfig};
use crate::special::unit_sphere_area;

/// `T[φ] = ∫ K φ_s + Σ c_α (−1)^{|α|} ∂^α φ(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedDistribution {
    kernel: Kernel,
    dim: usize,
    omega: f64,
    cutoff: CutoffFunction,
    counterterms: BTreeMap<MultiIndex, f64>,
}

/// Builds the renormalized extension of the punctured kernel `K` with
/// singular order `ω = sd − n ≥ 0`.
pub fn extend_renormalized(
    kernel: Kernel,
    dim: usize,
    omega: f64,
    cutoff: CutoffFunction,
    counterterms: BTreeMap<MultiIndex, f64>,
) -> Result<ExtendedDistribution> {
    kernel.validate()?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::precondition("renormalized extension needs ω ≥ 0"));
    }
    if cutoff.dim() != dim {
        return Err(Error::DimensionMismatch {
            distribution: dim,
            test_function: cutoff.dim(),
        });
    }
    let max_order = omega.floor() as usize;
    for (alpha, c) in &counterterms {
        if alpha.dim() != dim || alpha.order() > max_order || !c.is_finite() {
            return Err(Error::invalid("counterterm keys must satisfy |α| ≤ ⌊ω⌋"));
        }
    }
    Ok(ExtendedDistribution {
        kernel,
        dim,
        omega,
        cutoff,
        counterterms,
    })
}

impl ExtendedDistribution {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn cutoff(&self) -> &CutoffFunction {
        &self.cutoff
    }

    pub fn counterterms(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.counterterms
    }

    pub fn with_cutoff(&self, cutoff: CutoffFunction) -> Result<Self> {
        extend_renormalized(self.kernel.clone(), self.dim, self.omega, cutoff, self.counterterms.clone())
    }

    pub fn with_counterterms(&self, counterterms: BTreeMap<MultiIndex, f64>) -> Result<Self> {
        extend_renormalized(self.kernel.clone(), self.dim, self.omega, self.cutoff, counterterms)
    }

    /// `∫ K φ_s` alone, without counterterms.
    pub fn subtracted_integral(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                distribution: self.dim,
                test_function: phi.dim(),
            });
        }
        let sub = taylor_subtract(phi, self.omega, &self.cutoff)?;
        let dim = self.dim;
        let kernel = &self.kernel;
        let integrand = |t: f64| {
            let v = sub.value(t);
            if v == 0.0 {
                0.0
            } else {
                kernel.eval_weighted(t, dim) * v
            }
        };
        // t·I(t) must shrink toward 0, or ω was too small for this kernel
        let r = sub.series_radius();
        let (near, nearer) = (r * 1e-6, r * 1e-8);
        let (a, b) = ((near * integrand(near)).abs(), (nearer * integrand(nearer)).abs());
        if !(a.is_finite() && b.is_finite()) || (b > 0.0 && b > 0.5 * a) {
            return Err(Error::precondition(
                "subtracted integrand is not integrable at 0; ω is too small for this kernel",
            ));
        }
        let pts = quadrature_breakpoints(&kernel.breakpoints(), dim, &sub);
        let area = if dim == 1 { 1.0 } else { unit_sphere_area(dim) };
        let inner_cfg = cfg.with_tolerances(cfg.abs_tol / area, cfg.rel_tol);
        let singular = kernel.singular_at_origin();
        let q = integrate_pieces(integrand, &pts, &inner_cfg, |lo, hi| singular && (lo == 0.0 || hi == 0.0))?;
        Ok(area * q.value)
    }

    /// `Σ c_α (−1)^{|α|} ∂^α φ(0)`
    pub fn counterterm_value(&self, phi: &dyn Probe) -> Result<f64> {
        let mut total = 0.0;
        for (alpha, c) in &self.counterterms {
            total += c * sign_power(alpha.order()) * origin_derivative(phi, alpha)?;
        }
        Ok(total)
    }

    pub fn apply(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(self.subtracted_integral(phi, cfg)? + self.counterterm_value(phi)?)
    }
}
