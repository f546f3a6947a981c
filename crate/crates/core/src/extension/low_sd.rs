//! Unique extension when `sd < n`: `T[φ] = lim_{ε↘0} T₀[c_ε φ]`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::distribution::{transition, Distribution, DistributionKind, Kernel, Probe, TestFunction};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::QuadratureConfig;

use super::Extension;

// Richardson levels applied to the ε-sequence.
const MAX_LEVELS: usize = 3;

/// `c_ε φ` with `c_ε(t) = S((|t| − 3ε/2)/(ε/2))`: zero on `|t| ≤ ε`, one on
/// `|t| ≥ 2ε`, smooth in between.
#[derive(Debug, Clone)]
pub struct Excised<P> {
    pub inner: P,
    pub epsilon: f64,
}

impl<P: Probe> Excised<P> {
    fn factor_jet(&self, t: f64) -> Jet {
        let half = 0.5 * self.epsilon;
        let tau = (t.abs() - 3.0 * half) / half;
        if tau <= -1.0 {
            return Jet::ZERO;
        }
        if tau >= 1.0 {
            return Jet::constant(1.0);
        }
        let mut j = crate::distribution::bump_jet(tau, 0.0)
            .scale(1.0 / crate::distribution::MOLLIFIER_INTEGRAL)
            .integrate(transition(tau))
            .rescale_variable(1.0 / half);
        if t < 0.0 {
            j = j.rescale_variable(-1.0);
        }
        j
    }

    fn factor(&self, t: f64) -> f64 {
        let half = 0.5 * self.epsilon;
        transition((t.abs() - 3.0 * half) / half)
    }
}

impl<P: Probe> Probe for Excised<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn jet(&self, t: f64) -> Jet {
        let c = self.factor_jet(t);
        if c == Jet::ZERO {
            Jet::ZERO
        } else {
            c * self.inner.jet(t)
        }
    }
    fn value(&self, t: f64) -> f64 {
        let c = self.factor(t);
        if c == 0.0 {
            0.0
        } else {
            c * self.inner.value(t)
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.inner.breakpoints();
        for k in [1.0, 1.5, 2.0] {
            pts.push(k * self.epsilon);
            if self.dim() == 1 {
                pts.push(-k * self.epsilon);
            }
        }
        pts
    }
    fn length_scale(&self) -> f64 {
        self.inner.length_scale().min(self.epsilon)
    }
}

/// Extension of a punctured regular distribution whose scaling degree is
/// below the dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LowSdExtension {
    kernel: Kernel,
    dim: usize,
    sd: f64,
    schedule: Vec<f64>,
    tolerance: f64,
}

/// Raw and extrapolated values of `T₀[c_ε φ]` along the schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonLimit {
    pub raw: Vec<f64>,
    pub extrapolated: Vec<f64>,
    pub value: f64,
    pub last_step: f64,
}

impl LowSdExtension {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Samples the ε-sequence and extrapolates it without judging convergence.
    ///
    /// The defect `T₀[(1 − c_ε)φ]` expands in `ε^{n−sd+2j}` (the odd Taylor
    /// terms of `φ` drop out against the even `c_ε`), so repeated
    /// Richardson elimination of those powers accelerates the limit.
    pub fn limit(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<EpsilonLimit> {
        let base = Distribution::punctured(self.dim, self.kernel.clone())?;
        let mut raw = Vec::with_capacity(self.schedule.len());
        for &eps in &self.schedule {
            raw.push(base.apply(&Excised { inner: phi, epsilon: eps }, cfg)?);
        }
        let levels = MAX_LEVELS.min(raw.len() - 2);
        let p = self.dim as f64 - self.sd;
        let mut cur = raw.clone();
        for j in 0..levels {
            let q = p + 2.0 * j as f64;
            cur = (0..cur.len() - 1)
                .map(|i| {
                    let rho = (self.schedule[i + j + 1] / self.schedule[i + j]).powf(q);
                    (cur[i + 1] - rho * cur[i]) / (1.0 - rho)
                })
                .collect();
        }
        let value = cur[cur.len() - 1];
        let last_step = (value - cur[cur.len() - 2]).abs();
        Ok(EpsilonLimit {
            raw,
            extrapolated: cur,
            value,
            last_step,
        })
    }

    pub fn apply(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
        let lim = self.limit(phi, cfg)?;
        if lim.last_step <= self.tolerance && lim.value.is_finite() {
            Ok(lim.value)
        } else {
            Err(Error::NonConvergence {
                last_step: lim.last_step,
                sequence: lim.raw,
            })
        }
    }
}

/// Extends the punctured regular `t0` across the origin given `sd < n`.
///
/// The schedule must be strictly decreasing with at least four entries;
/// convergence is certified on a unit mollifier centred at 0, and every
/// later `apply` re-checks it for its own probe.
pub fn extend_low_sd(
    t0: &Distribution,
    sd: f64,
    schedule: &[f64],
    tolerance: f64,
    cfg: &QuadratureConfig,
) -> Result<Distribution> {
    let kernel = match t0.kind() {
        DistributionKind::Regular { kernel, punctured: true } => kernel.clone(),
        _ => return Err(Error::invalid("extend_low_sd needs a punctured regular distribution")),
    };
    let dim = t0.dim();
    if !(sd < dim as f64) {
        return Err(Error::precondition("sd ≥ n: use the renormalized extension"));
    }
    if schedule.len() < 4
        || schedule.iter().any(|&e| !(e > 0.0 && e.is_finite()))
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::invalid("ε schedule needs ≥ 4 strictly decreasing positive entries"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let ext = LowSdExtension {
        kernel,
        dim,
        sd,
        schedule: schedule.to_vec(),
        tolerance,
    };
    let reference = TestFunction::mollifier(dim, 0.0, 1.0)?;
    ext.apply(&reference, cfg)?;
    Ok(Distribution::from_extension(Extension::LowDegree(ext)))
}

/// Geometric schedule `ε₀, ε₀/r, ε₀/r², …` with `count` entries.
pub fn geometric_schedule(first: f64, ratio: f64, count: usize) -> Vec<f64> {
    let mut out = vec![first];
    for _ in 1..count {
        let last = *out.last().unwrap();
        out.push(last / ratio);
    }
    out
}
