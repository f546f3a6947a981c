//! Extension of distributions from `ℝⁿ∖{0}` to `ℝⁿ`.
//!
//! * `sd < n`: the extension is unique, obtained as `lim T₀[c_ε φ]`
//!   ([`extend_low_sd`]).
//! * `sd ≥ n`: subtract the `w`-weighted Taylor polynomial of order
//!   `⌊ω⌋ = ⌊sd − n⌋` and add δ-derivative counterterms
//!   ([`extend_renormalized`]). The freedom in `w` and in the counterterm
//!   coefficients is the renormalization ambiguity; moving the cutoff scale
//!   `M` is the RG flow.

mod cutoff;
mod low_sd;
mod renormalized;

use alloc::collections::BTreeMap;

#[allow(unused_imports)]
use num_traits::Float;

pub use cutoff::{taylor_subtract, CutoffFunction, CutoffKind, Subtracted};
pub use low_sd::{extend_low_sd, geometric_schedule, EpsilonLimit, Excised, LowSdExtension};
pub use renormalized::{extend_renormalized, ExtendedDistribution};

use crate::distribution::{Distribution, Kernel, MultiIndex, Probe};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::special::binomial;

#[derive(Debug, Clone, PartialEq)]
pub enum Extension {
    Renormalized(ExtendedDistribution),
    LowDegree(LowSdExtension),
}

impl Extension {
    pub fn dim(&self) -> usize {
        match self {
            Extension::Renormalized(e) => e.dim(),
            Extension::LowDegree(e) => e.dim(),
        }
    }

    pub fn apply(&self, phi: &dyn Probe, cfg: &QuadratureConfig) -> Result<f64> {
        match self {
            Extension::Renormalized(e) => e.apply(phi, cfg),
            Extension::LowDegree(e) => e.apply(phi, cfg),
        }
    }
}

impl From<ExtendedDistribution> for Distribution {
    fn from(e: ExtendedDistribution) -> Self {
        Distribution::from_extension(Extension::Renormalized(e))
    }
}

/// `f'` with `f(y) = −ln(M|y|) θ_s(1 − M|y|) sign(y)`, a log-kernel
/// representative of the extended `1/|x|` in one dimension: on probes
/// supported inside the plateau, `−(f')[φ]` matches the subtraction
/// extension with cutoff `θ_s(1 − M|x|)`.
pub fn log_kernel_form(mass: f64, smoothing: f64) -> Result<Distribution> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::invalid("M must be positive"));
    }
    let f = Distribution::regular(1, Kernel::LogStep { mass, smoothing })?;
    Distribution::derivative(f, MultiIndex::single(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountertermCount {
    pub n: usize,
    pub omega: f64,
    /// Multi-indices with `|α| ≤ ⌊ω⌋`: `C(n + ⌊ω⌋, n)`.
    pub total: u64,
    /// Polynomials in the Laplacian of degree `≤ ⌊ω⌋`: `⌊ω/2⌋ + 1`.
    pub rotation_invariant: u64,
}

pub fn counterterm_dimension(n: usize, omega: f64) -> Result<CountertermCount> {
    if n == 0 || omega.is_nan() {
        return Err(Error::invalid("counterterm count needs n ≥ 1 and a numeric ω"));
    }
    let (total, rotation_invariant) = if omega < 0.0 {
        (0, 0)
    } else {
        let k = omega.floor() as u64;
        (binomial(n as u64 + k, n as u64), k / 2 + 1)
    };
    Ok(CountertermCount {
        n,
        omega,
        total,
        rotation_invariant,
    })
}

/// `T_{M'}[φ] − T_M[φ]` for a smoothed-step extension moved between scales.
///
/// For the `1/|x|` extension the difference is `2 ln(M'/M) φ(0)` for every
/// smoothing width: only `w` changes, and
/// `−φ(0) ∫ (w(M'x) − w(Mx))/|x| dx` is a Frullani integral.
pub fn rg_flow_difference(
    ext: &ExtendedDistribution,
    mass: f64,
    mass_prime: f64,
    phi: &dyn Probe,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(mass > 0.0 && mass_prime > 0.0) {
        return Err(Error::invalid("RG scales must be positive"));
    }
    let at = |m: f64| ext.with_cutoff(ext.cutoff().with_mass(m)?);
    let t = at(mass)?;
    if mass == mass_prime {
        t.apply(phi, cfg)?;
        return Ok(0.0);
    }
    let t_prime = at(mass_prime)?;
    Ok(t_prime.apply(phi, cfg)? - t.apply(phi, cfg)?)
}

/// `T^{w₁}[φ] − T^{w₂}[φ]` for a probe vanishing to order `⌊ω⌋` at 0, where
/// the two extensions can only differ by δ-derivative terms.
pub fn w_independence_check(
    kernel: &Kernel,
    n: usize,
    omega: f64,
    w1: CutoffFunction,
    w2: CutoffFunction,
    phi: &dyn Probe,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::precondition("w-independence needs ω ≥ 0"));
    }
    let jet = phi.jet(0.0);
    let scale = jet.0.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let order = omega.floor() as usize;
    if (0..=order.min(crate::jet::MAX_ORDER)).any(|k| jet[k].abs() > 1e-12 * scale) {
        return Err(Error::precondition("probe must vanish to order ⌊ω⌋ at the origin"));
    }
    let e1 = extend_renormalized(kernel.clone(), n, omega, w1, BTreeMap::new())?;
    let e2 = extend_renormalized(kernel.clone(), n, omega, w2, BTreeMap::new())?;
    Ok(e1.apply(phi, cfg)? - e2.apply(phi, cfg)?)
}
