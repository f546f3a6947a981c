//! Cutoff functions `w` with `w(0) = 1` and the `w`-weighted Taylor
//! subtraction `φ ↦ φ_s`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::distribution::{bump, bump_jet, smooth_step, smooth_step_jet, Probe};
use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffKind {
    /// `exp(1 − 1/(1−(t/R)²))`: the standard mollifier scaled to 1 at 0.
    Mollifier { radius: f64 },
    /// `θ_s(1 − M|t|)`: 1 on `|t| ≤ (1−s)/M`, 0 on `|t| ≥ (1+s)/M`.
    SmoothedStep { mass: f64, width: f64 },
}

/// Compactly supported weight with `w(0) = 1` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFunction {
    dim: usize,
    kind: CutoffKind,
}

impl CutoffFunction {
    pub fn new(dim: usize, kind: CutoffKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        match kind {
            CutoffKind::Mollifier { radius } if !(radius > 0.0 && radius.is_finite()) => {
                Err(Error::invalid("cutoff radius must be positive"))
            }
            CutoffKind::SmoothedStep { mass, width }
                if !(mass > 0.0 && mass.is_finite() && width > 0.0 && width < 1.0) =>
            {
                Err(Error::invalid("smoothed step needs M > 0 and 0 < s < 1"))
            }
            _ => Ok(Self { dim, kind }),
        }
    }

    pub fn mollifier(dim: usize, radius: f64) -> Result<Self> {
        Self::new(dim, CutoffKind::Mollifier { radius })
    }

    pub fn smoothed_step(dim: usize, mass: f64, width: f64) -> Result<Self> {
        Self::new(dim, CutoffKind::SmoothedStep { mass, width })
    }

    pub fn kind(&self) -> CutoffKind {
        self.kind
    }

    /// Same shape at a different scale `M`; smoothed steps only.
    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        match self.kind {
            CutoffKind::SmoothedStep { width, .. } => Self::smoothed_step(self.dim, mass, width),
            CutoffKind::Mollifier { .. } => Err(Error::invalid("a mollifier cutoff has no scale M")),
        }
    }

    /// Radius of the ball on which `w ≡ 1` (zero for the mollifier).
    pub fn plateau_radius(&self) -> f64 {
        match self.kind {
            CutoffKind::Mollifier { .. } => 0.0,
            CutoffKind::SmoothedStep { mass, width } => (1.0 - width) / mass,
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self.kind {
            CutoffKind::Mollifier { radius } => radius,
            CutoffKind::SmoothedStep { mass, width } => (1.0 + width) / mass,
        }
    }

    /// Distance from 0 over which the Taylor series at 0 stays accurate.
    fn series_scale(&self) -> f64 {
        match self.kind {
            CutoffKind::Mollifier { radius } => radius,
            CutoffKind::SmoothedStep { .. } => self.plateau_radius(),
        }
    }
}

impl Probe for CutoffFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self) -> (f64, f64) {
        let r = self.support_radius();
        if self.dim == 1 {
            (-r, r)
        } else {
            (0.0, r)
        }
    }

    fn jet(&self, t: f64) -> Jet {
        match self.kind {
            CutoffKind::Mollifier { radius } => bump_jet(t / radius, 1.0).rescale_variable(1.0 / radius),
            CutoffKind::SmoothedStep { mass, width } => {
                let j = smooth_step_jet(mass * t.abs(), width).rescale_variable(mass);
                if t < 0.0 {
                    j.rescale_variable(-1.0)
                } else {
                    j
                }
            }
        }
    }

    fn value(&self, t: f64) -> f64 {
        match self.kind {
            CutoffKind::Mollifier { radius } => bump(t / radius, 1.0),
            CutoffKind::SmoothedStep { mass, width } => smooth_step(mass * t.abs(), width),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        if let CutoffKind::SmoothedStep { mass, .. } = self.kind {
            pts.push(self.plateau_radius());
            pts.push(1.0 / mass);
        }
        pts.push(self.support_radius());
        if self.dim == 1 {
            let neg: Vec<f64> = pts.iter().map(|p| -p).collect();
            pts.extend(neg);
        }
        pts
    }

    fn length_scale(&self) -> f64 {
        match self.kind {
            CutoffKind::Mollifier { radius } => radius,
            CutoffKind::SmoothedStep { mass, width } => width / mass,
        }
    }
}

// Below this multiple of the local length scale, φ_s is summed from its
// Taylor series at 0 instead of by cancelling subtraction.
const SERIES_FRACTION: f64 = 0.03;

/// `φ_s(t) = φ(t) − w(t) Σ_{k ≤ ⌊ω⌋} q_k t^k` with `q_k` the Taylor
/// coefficients of `φ/w` at 0.
///
/// For radial profiles the polynomial `Σ q_k r^k` contains only even powers
/// and equals `Σ_{|α|≤⌊ω⌋} x^α ∂^α(φ/w)(0)/α!`.
#[derive(Clone)]
pub struct Subtracted<'a> {
    phi: &'a dyn Probe,
    cutoff: &'a CutoffFunction,
    taylor: Vec<f64>,
    origin_series: Jet,
    series_radius: f64,
}

impl<'a> Subtracted<'a> {
    /// Coefficients `q_0 … q_{⌊ω⌋}` that were subtracted.
    pub fn taylor_coefficients(&self) -> &[f64] {
        &self.taylor
    }

    /// Radius inside which values come from the Taylor series at 0.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }

    fn polynomial(&self, t: f64) -> f64 {
        self.taylor.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

impl core::fmt::Debug for Subtracted<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Subtracted")
            .field("taylor", &self.taylor)
            .field("series_radius", &self.series_radius)
            .finish()
    }
}

pub fn taylor_subtract<'a>(phi: &'a dyn Probe, omega: f64, cutoff: &'a CutoffFunction) -> Result<Subtracted<'a>> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid("singular order ω must be finite and ≥ 0"));
    }
    if phi.dim() != cutoff.dim {
        return Err(Error::DimensionMismatch {
            distribution: cutoff.dim,
            test_function: phi.dim(),
        });
    }
    let order = omega.floor() as usize;
    // one spare order keeps the series at 0 non-trivial after subtraction
    if order >= MAX_ORDER {
        return Err(Error::DerivativeUnavailable { order });
    }
    let w0 = cutoff.jet(0.0);
    let quotient = phi.jet(0.0) / w0;
    if phi.dim() > 1 {
        let scale = quotient.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for j in (1..=order).step_by(2) {
            if quotient[j].abs() > 1e-14 * (1.0 + scale) {
                return Err(Error::DerivativeUnavailable { order: j });
            }
        }
    }
    let taylor: Vec<f64> = (0..=order)
        .map(|k| if phi.dim() > 1 && k % 2 == 1 { 0.0 } else { quotient[k] })
        .collect();
    let mut origin_series = phi.jet(0.0) - w0 * Jet::polynomial(&taylor, 0.0);
    // orders ≤ ⌊ω⌋ cancel analytically; what remains there is rounding
    for k in 0..=order {
        origin_series[k] = 0.0;
    }
    let series_radius = SERIES_FRACTION * phi.length_scale().min(cutoff.series_scale());
    Ok(Subtracted {
        phi,
        cutoff,
        taylor,
        origin_series,
        series_radius,
    })
}

impl Probe for Subtracted<'_> {
    fn dim(&self) -> usize {
        self.phi.dim()
    }

    fn support(&self) -> (f64, f64) {
        let (a, b) = self.phi.support();
        let (c, d) = self.cutoff.support();
        (a.min(c), b.max(d))
    }

    fn jet(&self, t: f64) -> Jet {
        self.phi.jet(t) - self.cutoff.jet(t) * Jet::polynomial(&self.taylor, t)
    }

    fn value(&self, t: f64) -> f64 {
        if t.abs() < self.series_radius {
            return self.origin_series.eval(t);
        }
        let w = self.cutoff.value(t);
        if w == 0.0 {
            self.phi.value(t)
        } else {
            self.phi.value(t) - w * self.polynomial(t)
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.phi.breakpoints();
        pts.extend(self.cutoff.breakpoints());
        pts.push(self.series_radius);
        if self.dim() == 1 {
            pts.push(-self.series_radius);
        }
        pts
    }

    fn length_scale(&self) -> f64 {
        self.phi.length_scale().min(self.cutoff.length_scale())
    }
}
