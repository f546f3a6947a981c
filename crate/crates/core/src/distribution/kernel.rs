//! Scalar kernels of regular distributions.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::test_function::smooth_step;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// A function of `x` (n = 1) or of `r = |x|` (n > 1).
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Constant(f64),
    /// `c |t|^{−p}`
    PowerLaw { coefficient: f64, exponent: f64 },
    /// `exp(−t²/(2σ²))`
    Gaussian { width: f64 },
    /// `−ln(M|t|) θ_s(1 − M|t|) sign(t)`
    LogStep { mass: f64, smoothing: f64 },
    /// `t ↦ inner(factor · t)`
    Scaled { inner: Box<Kernel>, factor: f64 },
}

impl Kernel {
    pub fn power_law(exponent: f64) -> Self {
        Kernel::PowerLaw {
            coefficient: 1.0,
            exponent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Kernel::Constant(c) => c.is_finite(),
            Kernel::PowerLaw { coefficient, exponent } => coefficient.is_finite() && exponent.is_finite(),
            Kernel::Gaussian { width } => *width > 0.0 && width.is_finite(),
            Kernel::LogStep { mass, smoothing } => *mass > 0.0 && mass.is_finite() && *smoothing > 0.0 && *smoothing < 1.0,
            Kernel::Scaled { inner, factor } => return if *factor > 0.0 && factor.is_finite() { inner.validate() } else { Err(Error::invalid("kernel scale factor must be positive")) },
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("kernel parameters out of range"))
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Kernel::Constant(c) => *c,
            Kernel::PowerLaw { coefficient, exponent } => coefficient * t.abs().powf(-exponent),
            Kernel::Gaussian { width } => (-0.5 * (t / width) * (t / width)).exp(),
            Kernel::LogStep { mass, smoothing } => {
                let u = mass * t.abs();
                if u == 0.0 {
                    return 0.0;
                }
                let step = smooth_step(u, *smoothing);
                if step == 0.0 {
                    0.0
                } else {
                    -u.ln() * step * t.signum()
                }
            }
            Kernel::Scaled { inner, factor } => inner.eval(factor * t),
        }
    }

    /// `K(t) |t|^{n−1}`, the radial integrand weight (`n = 1`: just `K`).
    /// Power laws are combined into one power so that tiny radii neither
    /// overflow nor underflow separately.
    pub fn eval_weighted(&self, t: f64, dim: usize) -> f64 {
        if dim == 1 {
            return self.eval(t);
        }
        let k = dim as i32 - 1;
        match self {
            Kernel::PowerLaw { coefficient, exponent } => coefficient * t.abs().powf(k as f64 - exponent),
            Kernel::Scaled { inner, factor } => inner.eval_weighted(factor * t, dim) / factor.powi(k),
            _ => self.eval(t) * t.abs().powi(k),
        }
    }

    /// `t ↦ K(λt)`, collapsing nested rescalings.
    pub fn scaled(&self, lambda: f64) -> Kernel {
        match self {
            Kernel::Constant(c) => Kernel::Constant(*c),
            Kernel::Scaled { inner, factor } => Kernel::Scaled {
                inner: inner.clone(),
                factor: factor * lambda,
            },
            other => Kernel::Scaled {
                inner: Box::new(other.clone()),
                factor: lambda,
            },
        }
    }

    /// Whether the kernel may be unbounded as `t → 0`.
    pub fn singular_at_origin(&self) -> bool {
        match self {
            Kernel::PowerLaw { exponent, .. } => *exponent > 0.0,
            Kernel::LogStep { .. } => true,
            Kernel::Scaled { inner, .. } => inner.singular_at_origin(),
            _ => false,
        }
    }

    /// Nonnegative abscissae where the kernel changes character.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kernel::LogStep { mass, smoothing } => {
                vec![(1.0 - smoothing) / mass, 1.0 / mass, (1.0 + smoothing) / mass]
            }
            Kernel::Scaled { inner, factor } => inner.breakpoints().into_iter().map(|p| p / factor).collect(),
            _ => Vec::new(),
        }
    }

    /// Numerical local-integrability test in dimension `n`: the decade
    /// integrals `∫_{10^{−k−1}}^{10^{−k}} |K| r^{n−1} dr` must shrink
    /// geometrically as `k` grows.
    pub fn is_locally_integrable(&self, dim: usize) -> bool {
        let cfg = QuadratureConfig::default().with_tolerances(1e-300, 1e-10);
        let weight = |r: f64| self.eval_weighted(r, dim).abs();
        let decade = |k: i32| -> f64 {
            let hi = 10f64.powi(-k);
            let r = integrate(weight, hi / 10.0, hi, &cfg);
            match r {
                Ok(q) => q.value,
                Err(Error::Quadrature { value, .. }) => value,
                Err(_) => f64::NAN,
            }
        };
        let d: Vec<f64> = (5..=8).map(decade).collect();
        if d.iter().any(|v| !v.is_finite()) {
            return false;
        }
        d.windows(2).all(|w| w[1] == 0.0 || w[1] < 0.97 * w[0])
    }
}
