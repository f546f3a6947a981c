//! Distributions as linear functionals on test functions, the scaling map
//! `T_λ[φ] = T[φ_λ]`, and scaling-degree estimation.
//!
//! For `n > 1` everything is radial: kernels depend on `r = |x|` and test
//! functions on their radial profile, and `∫ dⁿx k(|x|) φ(|x|)` reduces to
//! `S_{n−1} ∫ r^{n−1} k(r) φ(r) dr`.

mod kernel;
mod scaling;
mod test_function;

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub use kernel::Kernel;
pub use scaling::{estimate_scaling_degree, propagator_sd, sd_calculus, ScalingReport, SdOperation};
pub use test_function::{
    origin_derivative, smooth_step, smooth_step_jet, transition, Combination, Derived, Probe, Scaled, Smoothing,
    TestFunction, MOLLIFIER_INTEGRAL,
};
pub(crate) use test_function::{bump, bump_jet};

use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::quadrature::{integrate_pieces, QuadratureConfig};
use crate::special::unit_sphere_area;

/// Multi-index `α ∈ ℕⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(alloc::vec![0; dim])
    }

    /// `(k)` in one dimension.
    pub fn single(k: u32) -> Self {
        Self(alloc::vec![k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// `|α|`
    pub fn order(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (2..=a).fold(1.0, |acc, i| acc * i as f64))
            .product()
    }

    /// All multi-indices in `n` variables with `|α| ≤ max_order`, graded.
    pub fn up_to_order(dim: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            let mut current = alloc::vec![0u32; dim];
            compositions(dim, order as u32, 0, &mut current, &mut out);
        }
        out
    }
}

fn compositions(dim: usize, remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if dim == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == dim - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        compositions(dim, remaining - a, pos + 1, current, out);
    }
    current[pos] = 0;
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// `φ ↦ ∫ K φ`; punctured kernels only accept probes vanishing near 0.
    Regular { kernel: Kernel, punctured: bool },
    /// `c ∂^α δ`
    DeltaTerm { alpha: MultiIndex, coefficient: f64 },
    Sum(Vec<Distribution>),
    /// `c ∂^α T`
    Derivative {
        of: Box<Distribution>,
        alpha: MultiIndex,
        coefficient: f64,
    },
    Extension(Box<Extension>),
    /// `T_λ` for variants without a closed-form rescaling.
    Pullback { of: Box<Distribution>, lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    dim: usize,
    kind: DistributionKind,
}

impl Distribution {
    /// Regular distribution of a locally integrable kernel.
    pub fn regular(dim: usize, kernel: Kernel) -> Result<Self> {
        check_dim(dim)?;
        kernel.validate()?;
        if !kernel.is_locally_integrable(dim) {
            return Err(Error::NotLocallyIntegrable);
        }
        Ok(Self {
            dim,
            kind: DistributionKind::Regular {
                kernel,
                punctured: false,
            },
        })
    }

    /// Kernel defined on `ℝⁿ∖{0}` only.
    pub fn punctured(dim: usize, kernel: Kernel) -> Result<Self> {
        check_dim(dim)?;
        kernel.validate()?;
        Ok(Self {
            dim,
            kind: DistributionKind::Regular {
                kernel,
                punctured: true,
            },
        })
    }

    pub fn delta(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Self::delta_derivative(MultiIndex::zeros(dim), 1.0)
    }

    pub fn delta_derivative(alpha: MultiIndex, coefficient: f64) -> Result<Self> {
        check_dim(alpha.dim())?;
        Ok(Self {
            dim: alpha.dim(),
            kind: DistributionKind::DeltaTerm { alpha, coefficient },
        })
    }

    pub fn sum(parts: Vec<Distribution>) -> Result<Self> {
        let dim = parts
            .first()
            .map(|p| p.dim)
            .ok_or_else(|| Error::invalid("empty sum of distributions"))?;
        if let Some(p) = parts.iter().find(|p| p.dim != dim) {
            return Err(Error::DimensionMismatch {
                distribution: dim,
                test_function: p.dim,
            });
        }
        Ok(Self {
            dim,
            kind: DistributionKind::Sum(parts),
        })
    }

    /// `∂^α T`. Only one-dimensional derivatives are supported; radial
    /// profiles are not closed under partial derivatives.
    pub fn derivative(of: Distribution, alpha: MultiIndex) -> Result<Self> {
        if alpha.dim() != of.dim {
            return Err(Error::invalid("multi-index length differs from the dimension"));
        }
        if of.dim > 1 && alpha.order() > 0 {
            return Err(Error::Unsupported("derivatives of radial distributions".into()));
        }
        Ok(Self {
            dim: of.dim,
            kind: DistributionKind::Derivative {
                of: Box::new(of),
                alpha,
                coefficient: 1.0,
            },
        })
    }

    pub fn from_extension(ext: Extension) -> Self {
        Self {
            dim: ext.dim(),
            kind: DistributionKind::Extension(Box::new(ext)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn apply(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                distribution: self.dim,
                test_function: phi.dim(),
            });
        }
        match &self.kind {
            DistributionKind::Regular { kernel, punctured } => {
                if *punctured {
                    check_puncture(phi)?;
                }
                integrate_kernel(kernel, self.dim, phi, cfg)
            }
            DistributionKind::DeltaTerm { alpha, coefficient } => {
                Ok(coefficient * sign_power(alpha.order()) * origin_derivative(phi, alpha)?)
            }
            DistributionKind::Sum(parts) => {
                let mut total = 0.0;
                for p in parts {
                    total += p.apply(phi, cfg)?;
                }
                Ok(total)
            }
            DistributionKind::Derivative { of, alpha, coefficient } => {
                let k = alpha.order();
                if k == 0 {
                    return Ok(coefficient * of.apply(phi, cfg)?);
                }
                let d = Derived { inner: phi, order: k };
                Ok(coefficient * sign_power(k) * of.apply(&d, cfg)?)
            }
            DistributionKind::Extension(ext) => ext.apply(phi, cfg),
            DistributionKind::Pullback { of, lambda } => of.apply(
                &Scaled {
                    inner: phi,
                    lambda: *lambda,
                },
                cfg,
            ),
        }
    }

    /// `T_λ`, defined by `T_λ[φ] = T[φ_λ]` with `φ_λ(x) = λ^{−n} φ(x/λ)`.
    pub fn scale(&self, lambda: f64) -> Result<Distribution> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        let kind = match &self.kind {
            DistributionKind::Regular { kernel, punctured } => DistributionKind::Regular {
                kernel: kernel.scaled(lambda),
                punctured: *punctured,
            },
            DistributionKind::DeltaTerm { alpha, coefficient } => DistributionKind::DeltaTerm {
                alpha: alpha.clone(),
                coefficient: coefficient * lambda.powi(-((self.dim + alpha.order()) as i32)),
            },
            DistributionKind::Sum(parts) => {
                DistributionKind::Sum(parts.iter().map(|p| p.scale(lambda)).collect::<Result<_>>()?)
            }
            DistributionKind::Derivative { of, alpha, coefficient } => DistributionKind::Derivative {
                of: Box::new(of.scale(lambda)?),
                alpha: alpha.clone(),
                coefficient: coefficient * lambda.powi(-(alpha.order() as i32)),
            },
            DistributionKind::Pullback { of, lambda: l } => DistributionKind::Pullback {
                of: of.clone(),
                lambda: l * lambda,
            },
            DistributionKind::Extension(_) => DistributionKind::Pullback {
                of: Box::new(self.clone()),
                lambda,
            },
        };
        Ok(Self { dim: self.dim, kind })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::invalid("dimension must be at least 1"))
    } else {
        Ok(())
    }
}

pub(crate) fn sign_power(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Relative size of the ball around 0 on which punctured probes must vanish.
pub const PUNCTURE_TOLERANCE: f64 = 1e-6;

/// Checks that `φ`, `φ'`, `φ''` vanish at 0 and `φ ≡ 0` on a small ball.
pub fn check_puncture(phi: &dyn Probe) -> Result<()> {
    let jet = phi.jet(0.0);
    if (0..=2).any(|k| jet[k] != 0.0) {
        return Err(Error::PunctureViolation);
    }
    let (a, b) = phi.support();
    let delta = PUNCTURE_TOLERANCE * 0.5 * (b - a);
    for k in 1..=16 {
        let t = delta * k as f64 / 16.0;
        if phi.value(t) != 0.0 || (phi.dim() == 1 && phi.value(-t) != 0.0) {
            return Err(Error::PunctureViolation);
        }
    }
    Ok(())
}

/// Breakpoints of `K φ` restricted to the support of `φ`.
pub(crate) fn quadrature_breakpoints(kernel_points: &[f64], dim: usize, phi: &dyn Probe) -> Vec<f64> {
    let (a, b) = phi.support();
    let mut pts = phi.breakpoints();
    pts.push(a);
    pts.push(b);
    pts.push(0.0);
    for &p in kernel_points {
        pts.push(p);
        if dim == 1 {
            pts.push(-p);
        }
    }
    pts.retain(|&p| p >= a && p <= b);
    pts
}

/// `∫ K φ`, radially reduced for `n > 1`.
fn integrate_kernel(kernel: &Kernel, dim: usize, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
    let pts = quadrature_breakpoints(&kernel.breakpoints(), dim, phi);
    let singular = kernel.singular_at_origin();
    let area = if dim == 1 { 1.0 } else { unit_sphere_area(dim) };
    let inner_cfg = cfg.with_tolerances(cfg.abs_tol / area, cfg.rel_tol);
    let integrand = |t: f64| {
        let v = phi.value(t);
        if v == 0.0 {
            0.0
        } else {
            kernel.eval_weighted(t, dim) * v
        }
    };
    let q = integrate_pieces(integrand, &pts, &inner_cfg, |lo, hi| singular && (lo == 0.0 || hi == 0.0))?;
    Ok(area * q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Scheme;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_tolerances(1e-12, 1e-12)
    }

    #[test]
    fn delta_on_normalized_mollifier() {
        let phi = TestFunction::mollifier(1, 0.0, 1.0).unwrap().normalized_at_origin().unwrap();
        let d = Distribution::delta(1).unwrap();
        assert!((d.apply(&phi, &cfg()).unwrap() - 1.0).abs() < 1e-15);
        let d1 = Distribution::delta_derivative(MultiIndex::single(1), 1.0).unwrap();
        assert_eq!(d1.apply(&phi, &cfg()).unwrap(), 0.0);
        let shifted = TestFunction::mollifier(1, 0.3, 1.0).unwrap();
        let expect = -shifted.jet(0.0).derivative(1).unwrap();
        assert_eq!(d1.apply(&shifted, &cfg()).unwrap(), expect);
    }

    #[test]
    fn constant_kernel_gives_mollifier_mass() {
        let phi = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
        let one = Distribution::regular(1, Kernel::Constant(1.0)).unwrap();
        let v = one.apply(&phi, &cfg()).unwrap();
        assert!((v - MOLLIFIER_INTEGRAL).abs() < 1e-12, "{v}");
    }

    #[test]
    fn non_integrable_kernel_rejected() {
        assert_eq!(
            Distribution::regular(1, Kernel::power_law(1.0)),
            Err(Error::NotLocallyIntegrable)
        );
        assert_eq!(
            Distribution::regular(4, Kernel::power_law(4.0)),
            Err(Error::NotLocallyIntegrable)
        );
        assert!(Distribution::regular(1, Kernel::power_law(0.5)).is_ok());
    }

    #[test]
    fn puncture_enforced() {
        let t = Distribution::punctured(1, Kernel::power_law(1.0)).unwrap();
        let centered = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
        assert_eq!(t.apply(&centered, &cfg()), Err(Error::PunctureViolation));
        // vanishes at 0 but not on a neighbourhood
        let odd = centered.clone().with_prefactor(alloc::vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(t.apply(&odd, &cfg()), Err(Error::PunctureViolation));
        let away = TestFunction::mollifier(1, 1.0, 0.5).unwrap();
        assert!(t.apply(&away, &cfg()).unwrap() > 0.0);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let d = Distribution::delta(4).unwrap();
        let phi = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
        assert_eq!(
            d.apply(&phi, &cfg()),
            Err(Error::DimensionMismatch {
                distribution: 4,
                test_function: 1
            })
        );
    }

    #[test]
    fn scaled_delta() {
        let phi = TestFunction::mollifier(4, 0.0, 1.0).unwrap();
        let d = Distribution::delta(4).unwrap();
        for lam in [0.5, 0.1, 3.0] {
            let v = d.scale(lam).unwrap().apply(&phi, &cfg()).unwrap();
            let expect = lam.powi(-4) * phi.value(0.0);
            assert!((v - expect).abs() < 1e-14 * expect.abs());
        }
    }

    #[test]
    fn homogeneous_kernel_scales() {
        let t = Distribution::punctured(1, Kernel::power_law(1.0)).unwrap();
        let phi = TestFunction::mollifier(1, -1.0, 0.7).unwrap();
        let base = t.apply(&phi, &cfg()).unwrap();
        for lam in [0.25, 0.5, 4.0] {
            let v = t.scale(lam).unwrap().apply(&phi, &cfg()).unwrap();
            assert!((v - base / lam).abs() < 1e-10 * base.abs());
        }
        let one = Distribution::regular(1, Kernel::Constant(1.0)).unwrap();
        assert_eq!(one.scale(0.3).unwrap(), one);
    }

    #[test]
    fn derivative_is_sign_flipped() {
        let phi = TestFunction::mollifier(1, 0.2, 1.0).unwrap();
        let base = Distribution::regular(1, Kernel::Constant(1.0)).unwrap();
        let d = Distribution::derivative(base, MultiIndex::single(1)).unwrap();
        // ∫ φ' = 0
        assert!(d.apply(&phi, &cfg()).unwrap().abs() < 1e-12);
        let g = Distribution::regular(1, Kernel::Gaussian { width: 0.5 }).unwrap();
        let dg = Distribution::derivative(g, MultiIndex::single(1)).unwrap();
        // ∂(e^{−x²/2σ²}) = −x/σ² e^{−x²/2σ²}
        let v = dg.apply(&phi, &cfg()).unwrap();
        let cfg2 = cfg().with_scheme(Scheme::TanhSinh);
        let q = crate::quadrature::integrate(
            |x| -x / 0.25 * (-2.0 * x * x).exp() * phi.value(x),
            -0.8,
            1.2,
            &cfg2,
        )
        .unwrap();
        assert!((v - q.value).abs() < 1e-10, "{v} {}", q.value);
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(MultiIndex::up_to_order(4, 2).len(), 15);
        assert_eq!(MultiIndex::up_to_order(1, 3).len(), 4);
        assert_eq!(MultiIndex::new(alloc::vec![2, 0, 3]).factorial(), 12.0);
    }
}
