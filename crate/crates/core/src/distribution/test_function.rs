//! Test functions and the [`Probe`] interface distributions are applied to.
//!
//! Every probe is described by a one-variable profile: the coordinate `x`
//! itself in one dimension, the radius `r = |x|` for `n > 1`. Derivatives
//! come from [`Jet`]s built out of closed-form recurrences.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::quadrature::{integrate, QuadratureConfig};

/// `∫_{−1}^{1} exp(−1/(1−y²)) dy`
pub const MOLLIFIER_INTEGRAL: f64 = 0.443_993_816_168_079_4;

// exp(−745) is below the smallest subnormal
const UNDERFLOW: f64 = 745.0;

/// `exp(shift − 1/(1−y²))` on `|y| < 1`, zero elsewhere.
pub(crate) fn bump(y: f64, shift: f64) -> f64 {
    let q = 1.0 - y * y;
    if !(q > 0.0) {
        return 0.0;
    }
    let inv = 1.0 / q;
    if inv - shift > UNDERFLOW {
        return 0.0;
    }
    (shift - inv).exp()
}

pub(crate) fn bump_jet(y0: f64, shift: f64) -> Jet {
    let q0 = 1.0 - y0 * y0;
    if !(q0 > 0.0) || 1.0 / q0 - shift > UNDERFLOW {
        return Jet::ZERO;
    }
    let mut q = Jet::affine(q0, -2.0 * y0);
    q[2] = -1.0;
    let mut g = -q.recip();
    g[0] += shift;
    g.exp()
}

/// Smooth monotone transition from 0 at `τ = −1` to 1 at `τ = 1`: the
/// normalized running integral of the standard mollifier.
pub fn transition(tau: f64) -> f64 {
    if tau <= -1.0 {
        return 0.0;
    }
    if tau >= 1.0 {
        return 1.0;
    }
    // the relative target sits just above Gauss–Kronrod's rounding floor
    let cfg = QuadratureConfig::default().with_tolerances(1e-17, 5e-14);
    let m = |y: f64| bump(y, 0.0);
    // integrate over the shorter side to keep the result accurate near both ends
    if tau <= 0.0 {
        let q = integrate(m, -1.0, tau, &cfg).map(|r| r.value).unwrap_or_else(|e| match e {
            Error::Quadrature { value, .. } => value,
            _ => f64::NAN,
        });
        q / MOLLIFIER_INTEGRAL
    } else {
        let q = integrate(m, tau, 1.0, &cfg).map(|r| r.value).unwrap_or_else(|e| match e {
            Error::Quadrature { value, .. } => value,
            _ => f64::NAN,
        });
        1.0 - q / MOLLIFIER_INTEGRAL
    }
}

fn transition_jet(tau: f64) -> Jet {
    if tau <= -1.0 {
        return Jet::ZERO;
    }
    if tau >= 1.0 {
        return Jet::constant(1.0);
    }
    bump_jet(tau, 0.0)
        .scale(1.0 / MOLLIFIER_INTEGRAL)
        .integrate(transition(tau))
}

/// `θ_s(1 − u)` for `u ≥ 0`: 1 on `u ≤ 1 − s`, 0 on `u ≥ 1 + s`.
pub fn smooth_step(u: f64, s: f64) -> f64 {
    1.0 - transition((u - 1.0) / s)
}

/// Jet of [`smooth_step`] in `u`.
pub fn smooth_step_jet(u: f64, s: f64) -> Jet {
    let tau = (u - 1.0) / s;
    if tau <= -1.0 {
        return Jet::constant(1.0);
    }
    if tau >= 1.0 {
        return Jet::ZERO;
    }
    (Jet::constant(1.0) - transition_jet(tau)).rescale_variable(1.0 / s)
}

/// Profile shape on the unit ball `|y| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// `exp(−1/(1−y²))`
    Mollifier,
    /// `θ_s(1 − (1+s)|y|)`: flat top out to `|y| = (1−s)/(1+s)`.
    SmoothedStep { width: f64 },
}

impl Smoothing {
    fn value(&self, y: f64) -> f64 {
        match *self {
            Smoothing::Mollifier => bump(y, 0.0),
            Smoothing::SmoothedStep { width } => {
                if y.abs() >= 1.0 {
                    0.0
                } else {
                    smooth_step(y.abs() * (1.0 + width), width)
                }
            }
        }
    }

    fn jet(&self, y: f64) -> Jet {
        match *self {
            Smoothing::Mollifier => bump_jet(y, 0.0),
            Smoothing::SmoothedStep { width } => {
                if y.abs() >= 1.0 {
                    return Jet::ZERO;
                }
                let j = smooth_step_jet(y.abs() * (1.0 + width), width).rescale_variable(1.0 + width);
                if y < 0.0 {
                    j.rescale_variable(-1.0)
                } else {
                    j
                }
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match *self {
            Smoothing::Mollifier => vec![0.0],
            Smoothing::SmoothedStep { width } => {
                let inner = (1.0 - width) / (1.0 + width);
                vec![-inner, 0.0, inner]
            }
        }
    }
}

/// Anything a distribution can be applied to.
///
/// `t` is `x` for `n = 1` and the radius for `n > 1`.
pub trait Probe {
    fn dim(&self) -> usize;

    /// Interval in `t` outside which the profile vanishes identically.
    fn support(&self) -> (f64, f64);

    /// Taylor jet of the profile at `t`.
    fn jet(&self, t: f64) -> Jet;

    fn value(&self, t: f64) -> f64 {
        self.jet(t).value()
    }

    /// Points where the profile changes character; quadrature splits there.
    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        vec![a, b]
    }

    /// Length over which the profile varies appreciably.
    fn length_scale(&self) -> f64 {
        let (a, b) = self.support();
        0.5 * (b - a)
    }
}

impl<P: Probe + ?Sized> Probe for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn jet(&self, t: f64) -> Jet {
        (**self).jet(t)
    }
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn length_scale(&self) -> f64 {
        (**self).length_scale()
    }
}

/// `normalization · p(t) · F((t − center)/radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    dim: usize,
    center: f64,
    radius: f64,
    poly_prefactor: Vec<f64>,
    smoothing: Smoothing,
    normalization: f64,
}

impl TestFunction {
    /// For `n > 1` the profile is radial, so it must either be centred at the
    /// origin or keep its support away from it (`center ≥ radius`).
    pub fn new(
        dim: usize,
        center: f64,
        radius: f64,
        poly_prefactor: Vec<f64>,
        smoothing: Smoothing,
        normalization: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() || !normalization.is_finite() {
            return Err(Error::invalid("test function needs finite center, normalization and radius > 0"));
        }
        if dim > 1 && center != 0.0 && center < radius {
            return Err(Error::invalid(
                "radial test functions must be centred at 0 or supported away from it",
            ));
        }
        if let Smoothing::SmoothedStep { width } = smoothing {
            if !(width > 0.0 && width < 1.0) {
                return Err(Error::invalid("smoothing width must lie in (0, 1)"));
            }
        }
        if poly_prefactor.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite prefactor coefficient"));
        }
        let poly_prefactor = if poly_prefactor.is_empty() { vec![1.0] } else { poly_prefactor };
        Ok(Self {
            dim,
            center,
            radius,
            poly_prefactor,
            smoothing,
            normalization,
        })
    }

    /// Standard mollifier `exp(−1/(1−((t−c)/R)²))`, normalization 1.
    pub fn mollifier(dim: usize, center: f64, radius: f64) -> Result<Self> {
        Self::new(dim, center, radius, vec![1.0], Smoothing::Mollifier, 1.0)
    }

    /// Rescales so that the value at the origin is 1.
    pub fn normalized_at_origin(mut self) -> Result<Self> {
        let v = self.value(0.0);
        if v == 0.0 {
            return Err(Error::invalid("test function vanishes at the origin"));
        }
        self.normalization /= v;
        Ok(self)
    }

    pub fn with_prefactor(mut self, coeffs: Vec<f64>) -> Self {
        self.poly_prefactor = if coeffs.is_empty() { vec![1.0] } else { coeffs };
        self
    }

    pub fn with_normalization(mut self, normalization: f64) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn poly_prefactor(&self) -> &[f64] {
        &self.poly_prefactor
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    fn poly(&self, t: f64) -> f64 {
        self.poly_prefactor.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

impl Probe for TestFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self) -> (f64, f64) {
        let lo = self.center - self.radius;
        let hi = self.center + self.radius;
        if self.dim > 1 {
            (lo.max(0.0), hi)
        } else {
            (lo, hi)
        }
    }

    fn jet(&self, t: f64) -> Jet {
        let y = (t - self.center) / self.radius;
        let shape = self.smoothing.jet(y);
        if shape == Jet::ZERO {
            return Jet::ZERO;
        }
        (Jet::polynomial(&self.poly_prefactor, t) * shape.rescale_variable(1.0 / self.radius))
            .scale(self.normalization)
    }

    fn value(&self, t: f64) -> f64 {
        let y = (t - self.center) / self.radius;
        if y.abs() >= 1.0 {
            return 0.0;
        }
        self.normalization * self.poly(t) * self.smoothing.value(y)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        let mut pts = vec![a, b];
        pts.extend(
            self.smoothing
                .kinks()
                .into_iter()
                .map(|k| self.center + self.radius * k)
                .filter(|&p| p > a && p < b),
        );
        pts
    }

    fn length_scale(&self) -> f64 {
        match self.smoothing {
            Smoothing::Mollifier => self.radius,
            Smoothing::SmoothedStep { width } => self.radius * width / (1.0 + width),
        }
    }
}

/// `d^k φ/dx^k` of a one-dimensional probe.
#[derive(Debug, Clone)]
pub struct Derived<P> {
    pub inner: P,
    pub order: usize,
}

impl<P: Probe> Probe for Derived<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn jet(&self, t: f64) -> Jet {
        self.inner.jet(t).differentiate(self.order)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn length_scale(&self) -> f64 {
        self.inner.length_scale()
    }
}

/// `φ_λ(x) = λ^{−n} φ(x/λ)`.
#[derive(Debug, Clone)]
pub struct Scaled<P> {
    pub inner: P,
    pub lambda: f64,
}

impl<P: Probe> Probe for Scaled<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn support(&self) -> (f64, f64) {
        let (a, b) = self.inner.support();
        (a * self.lambda, b * self.lambda)
    }
    fn jet(&self, t: f64) -> Jet {
        self.inner
            .jet(t / self.lambda)
            .rescale_variable(1.0 / self.lambda)
            .scale(self.lambda.powi(-(self.dim() as i32)))
    }
    fn value(&self, t: f64) -> f64 {
        self.inner.value(t / self.lambda) * self.lambda.powi(-(self.dim() as i32))
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().into_iter().map(|p| p * self.lambda).collect()
    }
    fn length_scale(&self) -> f64 {
        self.inner.length_scale() * self.lambda
    }
}

/// `a φ + b ψ`.
#[derive(Debug, Clone)]
pub struct Combination<P, Q> {
    pub a: f64,
    pub first: P,
    pub b: f64,
    pub second: Q,
}

impl<P: Probe, Q: Probe> Probe for Combination<P, Q> {
    fn dim(&self) -> usize {
        self.first.dim()
    }
    fn support(&self) -> (f64, f64) {
        let (a1, b1) = self.first.support();
        let (a2, b2) = self.second.support();
        (a1.min(a2), b1.max(b2))
    }
    fn jet(&self, t: f64) -> Jet {
        self.first.jet(t).scale(self.a) + self.second.jet(t).scale(self.b)
    }
    fn value(&self, t: f64) -> f64 {
        self.a * self.first.value(t) + self.b * self.second.value(t)
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut p = self.first.breakpoints();
        p.extend(self.second.breakpoints());
        p
    }
    fn length_scale(&self) -> f64 {
        self.first.length_scale().min(self.second.length_scale())
    }
}

/// `∂^α φ(0)`.
///
/// In one dimension this is the `α₀`-th derivative of the profile. For a
/// radial profile `g(r) = Σ h_k r^{2k}` the Taylor polynomial of `φ` is
/// `Σ h_k |x|^{2k}`, so `∂^α φ(0) = α! h_k k!/β!` when `α = 2β`, `|β| = k`,
/// and zero when any component of `α` is odd.
pub fn origin_derivative<P: Probe + ?Sized>(probe: &P, alpha: &MultiIndex) -> Result<f64> {
    let n = probe.dim();
    if alpha.dim() != n {
        return Err(Error::invalid("multi-index length differs from the dimension"));
    }
    let order = alpha.order();
    if order > MAX_ORDER {
        return Err(Error::DerivativeUnavailable { order });
    }
    let jet = probe.jet(0.0);
    if n == 1 {
        return Ok(jet.derivative(order).unwrap());
    }
    // the profile must be even in r up to this order for φ to be smooth there
    let scale = jet.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for j in (1..=order).step_by(2) {
        if jet[j].abs() > 1e-14 * (1.0 + scale) {
            return Err(Error::DerivativeUnavailable { order: j });
        }
    }
    if alpha.components().iter().any(|a| a % 2 == 1) {
        return Ok(0.0);
    }
    let k = order / 2;
    let mut beta_fact = 1.0;
    for &a in alpha.components() {
        for i in 2..=(a / 2) {
            beta_fact *= i as f64;
        }
    }
    let mut k_fact = 1.0;
    for i in 2..=k {
        k_fact *= i as f64;
    }
    Ok(alpha.factorial() * jet[2 * k] * k_fact / beta_fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureConfig;

    #[test]
    fn mollifier_integral_constant() {
        let cfg = QuadratureConfig::default().with_tolerances(1e-16, 5e-14);
        let q = integrate(|y| bump(y, 0.0), -1.0, 1.0, &cfg).unwrap();
        assert!((q.value - MOLLIFIER_INTEGRAL).abs() < 1e-15);
    }

    #[test]
    fn transition_is_monotone_and_symmetric() {
        let mut prev = 0.0;
        for i in -20..=20 {
            let t = i as f64 / 20.0;
            let v = transition(t);
            assert!(v >= prev);
            assert!((v + transition(-t) - 1.0).abs() < 1e-14);
            prev = v;
        }
        assert_eq!(transition(-1.0), 0.0);
        assert_eq!(transition(1.0), 1.0);
        assert!((transition(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn smooth_step_plateaus() {
        let s = 0.1;
        assert_eq!(smooth_step(0.0, s), 1.0);
        assert_eq!(smooth_step(0.9, s), 1.0);
        assert_eq!(smooth_step(1.1, s), 0.0);
        let v = smooth_step(1.0, s);
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn jets_match_finite_differences() {
        let probes = [
            TestFunction::mollifier(1, 0.3, 1.2).unwrap().with_prefactor(vec![0.5, -1.0, 2.0]),
            TestFunction::new(1, 0.0, 1.0, vec![1.0], Smoothing::SmoothedStep { width: 0.3 }, 1.0).unwrap(),
        ];
        for p in &probes {
            for i in 1..10 {
                let t = -0.95 + 0.19 * i as f64;
                let j = p.jet(t);
                let h = 1e-5;
                let fd = (p.value(t + h) - p.value(t - h)) / (2.0 * h);
                let d1 = j.derivative(1).unwrap();
                assert!((fd - d1).abs() < 1e-6 * d1.abs().max(1.0), "t={t}: {fd} vs {d1}");
                assert!((j.value() - p.value(t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radial_origin_derivatives() {
        // φ(x) = exp(−1/(1−|x|²)) in ℝ²: near 0, e^{-1}(1 − r² + ...), so Δφ(0) = −4/e
        let p = TestFunction::mollifier(2, 0.0, 1.0).unwrap();
        let e_inv = (-1.0f64).exp();
        let dxx = origin_derivative(&p, &MultiIndex::new(vec![2, 0])).unwrap();
        let dyy = origin_derivative(&p, &MultiIndex::new(vec![0, 2])).unwrap();
        assert!((dxx - (-2.0 * e_inv)).abs() < 1e-14);
        assert!((dxx + dyy + 4.0 * e_inv).abs() < 1e-14);
        assert_eq!(origin_derivative(&p, &MultiIndex::new(vec![1, 0])).unwrap(), 0.0);
        // |x| prefactor is not smooth at the origin
        let q = p.clone().with_prefactor(vec![0.0, 1.0]);
        assert!(matches!(
            origin_derivative(&q, &MultiIndex::new(vec![1, 1])),
            Err(Error::DerivativeUnavailable { .. })
        ));
    }

    #[test]
    fn scaled_probe_definition() {
        let p = TestFunction::mollifier(1, 0.2, 1.0).unwrap();
        let s = Scaled { inner: &p, lambda: 0.5 };
        assert!((s.value(0.1) - 2.0 * p.value(0.2)).abs() < 1e-15);
        assert!((s.jet(0.1).derivative(1).unwrap() - 4.0 * p.jet(0.2).derivative(1).unwrap()).abs() < 1e-13);
    }
}
