//! One-dimensional quadrature: adaptive Gauss–Kronrod (G7/K15) subdivision
//! and double-exponential (tanh-sinh) rules, sharing one configuration type.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Adaptive bisection driven by the G7/K15 error estimate.
    GaussKronrod,
    /// Tanh-sinh with level doubling; copes with endpoint singularities.
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Interval budget for Gauss–Kronrod; caps the level count for tanh-sinh.
    pub max_subdivisions: usize,
    /// Cut radius for integrals over the real line. `None` derives it from
    /// `abs_tol` where the integrand has a known Gaussian tail.
    pub truncation_radius: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussKronrod,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 500,
            truncation_radius: None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("abs_tol and rel_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        if let Some(r) = self.truncation_radius {
            if !(r > 0.0) {
                return Err(Error::invalid("truncation_radius must be positive"));
            }
        }
        Ok(())
    }

    /// Acceptance threshold `max(abs_tol, rel_tol·|value|)`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Same config with the absolute tolerance split over `parts` pieces.
    pub fn split(&self, parts: usize) -> Self {
        let mut c = *self;
        c.abs_tol = self.abs_tol / parts.max(1) as f64;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Intervals used (Gauss–Kronrod) or levels used (tanh-sinh).
    pub subdivisions: usize,
    pub evaluations: usize,
}

impl QuadResult {
    fn zero() -> Self {
        QuadResult {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
            evaluations: 0,
        }
    }

    fn accumulate(&mut self, other: QuadResult) {
        self.value += other.value;
        self.error += other.error;
        self.subdivisions += other.subdivisions;
        self.evaluations += other.evaluations;
    }
}

/// Integrates `f` over `[a, b]` with the configured scheme.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    match cfg.scheme {
        Scheme::GaussKronrod => gauss_kronrod(f, a, b, cfg),
        Scheme::TanhSinh => tanh_sinh(f, a, b, cfg),
    }
}

/// Integrates over consecutive pieces `[p_i, p_{i+1}]` of sorted breakpoints.
///
/// Pieces listed in `endpoint_singular` (by left breakpoint index) always go
/// through tanh-sinh, whatever the configured scheme.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
    endpoint_singular: impl Fn(f64, f64) -> bool,
) -> Result<QuadResult> {
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let pieces = pts.len().saturating_sub(1);
    let piece_cfg = cfg.split(pieces);
    let mut total = QuadResult::zero();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let r = if endpoint_singular(a, b) {
            integrate(&mut f, a, b, &piece_cfg.with_scheme(Scheme::TanhSinh))
        } else {
            integrate(&mut f, a, b, &piece_cfg)
        };
        match r {
            Ok(r) => total.accumulate(r),
            Err(Error::Quadrature {
                value,
                error,
                subdivisions,
            }) => {
                return Err(Error::Quadrature {
                    value: total.value + value,
                    error: total.error + error,
                    subdivisions: total.subdivisions + subdivisions,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    Segment {
        a,
        b,
        value,
        error: err,
    }
}

/// Adaptive Gauss–Kronrod: bisect the segment with the largest error until
/// the summed estimate meets the configured target.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    let mut segs: Vec<Segment> = Vec::with_capacity(cfg.max_subdivisions.min(1024));
    segs.push(gk15(&mut f, a, b));
    let mut evaluations = 15;
    loop {
        let (value, error) = segs
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if error <= cfg.target(value) {
            return Ok(QuadResult {
                value,
                error,
                subdivisions: segs.len(),
                evaluations,
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap();
        let s = segs[worst];
        let mid = 0.5 * (s.a + s.b);
        let too_narrow = (s.b - s.a).abs() <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if segs.len() >= cfg.max_subdivisions || too_narrow || !error.is_finite() {
            return Err(Error::Quadrature {
                value,
                error,
                subdivisions: segs.len(),
            });
        }
        segs[worst] = gk15(&mut f, s.a, mid);
        segs.push(gk15(&mut f, mid, s.b));
        evaluations += 30;
    }
}

/// Tanh-sinh on `[a, b]`. The error estimate is the change between the last
/// two step-halving levels, which overstates the true error of the finer one.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let c = 0.5 * (lo + hi);
    let hl = 0.5 * (hi - lo);
    let max_level = cfg.max_subdivisions.clamp(3, 12);

    let mut evaluations = 1;
    let mut sum = FRAC_PI_2 * f(c);
    let level_sum = |f: &mut F, h: f64, start: usize, stride: usize, evals: &mut usize| {
        let mut s = 0.0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            // xc = 1 - tanh(u), computed without cancellation
            let xc = 1.0 / (u.exp() * u.cosh());
            if xc * hl < 1e-300 || t > 7.0 {
                break;
            }
            let w = FRAC_PI_2 * t.cosh() * xc * (2.0 - xc);
            let left = lo + hl * xc;
            let right = hi - hl * xc;
            if left > lo {
                s += w * f(left);
                *evals += 1;
            }
            if right < hi {
                s += w * f(right);
                *evals += 1;
            }
            k += stride;
        }
        s
    };

    let mut h = 1.0;
    sum += level_sum(&mut f, h, 1, 1, &mut evaluations);
    let mut estimate = h * sum * hl;
    for level in 1..=max_level {
        h *= 0.5;
        sum += level_sum(&mut f, h, 1, 2, &mut evaluations);
        let next = h * sum * hl;
        let err = (next - estimate).abs();
        estimate = next;
        if level >= 3 && err <= cfg.target(next) {
            return Ok(QuadResult {
                value: sign * next,
                error: err,
                subdivisions: level,
                evaluations,
            });
        }
        if level == max_level || !next.is_finite() {
            return Err(Error::Quadrature {
                value: sign * next,
                error: err,
                subdivisions: level,
            });
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn both_schemes_integrate_polynomials_and_exponentials() {
        for scheme in [Scheme::GaussKronrod, Scheme::TanhSinh] {
            let cfg = QuadratureConfig::default().with_scheme(scheme);
            let r = integrate(|x| x * x, 0.0, 3.0, &cfg).unwrap();
            assert!((r.value - 9.0).abs() < 1e-12, "{scheme:?}");
            let r = integrate(|x: f64| x.exp(), 0.0, 1.0, &cfg).unwrap();
            assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-12, "{scheme:?}");
            let r = integrate(|x: f64| x.sin(), 0.0, PI, &cfg).unwrap();
            assert!((r.value - 2.0).abs() < 1e-12, "{scheme:?}");
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let cfg = QuadratureConfig::default().with_scheme(Scheme::TanhSinh);
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate(|x: f64| x.cos(), 0.0, 1.0, &cfg).unwrap().value;
        let back = integrate(|x: f64| x.cos(), 1.0, 0.0, &cfg).unwrap().value;
        assert!((fwd + back).abs() < 1e-15);
        let cfg = cfg.with_scheme(Scheme::TanhSinh);
        let back = integrate(|x: f64| x.cos(), 1.0, 0.0, &cfg).unwrap().value;
        assert!((fwd + back).abs() < 1e-12);
    }

    #[test]
    fn error_estimate_respects_target() {
        let cfg = QuadratureConfig::default().with_tolerances(1e-8, 1e-8);
        let r = integrate(|x: f64| (-x * x).exp(), -6.0, 6.0, &cfg).unwrap();
        assert!(r.error <= cfg.target(r.value));
        assert!((r.value - PI.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_reports_best_value() {
        let mut cfg = QuadratureConfig::default().with_tolerances(1e-15, 1e-15);
        cfg.max_subdivisions = 2;
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &cfg).unwrap_err();
        match err {
            Error::Quadrature { subdivisions, .. } => assert_eq!(subdivisions, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = QuadratureConfig::default();
        cfg.abs_tol = 0.0;
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, &cfg),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn pieces_route_singular_segments_to_tanh_sinh() {
        let cfg = QuadratureConfig::default();
        let r = integrate_pieces(
            |x: f64| 1.0 / x.abs().sqrt(),
            &[-1.0, 0.0, 1.0],
            &cfg,
            |a, b| a == 0.0 || b == 0.0,
        )
        .unwrap();
        assert!((r.value - 4.0).abs() < 1e-9);
    }
}
