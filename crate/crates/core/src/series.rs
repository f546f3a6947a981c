//! Power series in a coupling λ, stored in sign + log-magnitude form.
//!
//! `(4k)!` overflows an `f64` at k = 43, so coefficients never leave the log
//! domain until they are multiplied by `λ^k`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_gamma, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        self.as_f64() as i8
    }

    pub fn from_i8(s: i8) -> Option<Sign> {
        match s {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficient {
    pub index: usize,
    pub sign: Sign,
    /// ln|a_k|; meaningless (set to −∞) when `sign` is [`Sign::Zero`].
    pub log_magnitude: f64,
}

impl SeriesCoefficient {
    pub fn zero(index: usize) -> Self {
        Self {
            index,
            sign: Sign::Zero,
            log_magnitude: f64::NEG_INFINITY,
        }
    }

    pub fn from_log(index: usize, sign: Sign, log_magnitude: f64) -> Self {
        if sign == Sign::Zero {
            Self::zero(index)
        } else {
            Self {
                index,
                sign,
                log_magnitude,
            }
        }
    }

    pub fn from_value(index: usize, value: f64) -> Self {
        if value == 0.0 {
            Self::zero(index)
        } else {
            let sign = if value > 0.0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            Self::from_log(index, sign, value.abs().ln())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// `a_k` as a float; saturates to ±∞ once |a_k| exceeds `f64::MAX`.
    pub fn value(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s => s.as_f64() * self.log_magnitude.exp(),
        }
    }

    /// `a_k λ^k` combined in the log domain.
    pub fn term(&self, lambda: f64) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s if self.index == 0 => s.as_f64() * self.log_magnitude.exp(),
            s => {
                let lam_sign = if lambda < 0.0 && self.index % 2 == 1 { -1.0 } else { 1.0 };
                s.as_f64() * lam_sign * (self.log_magnitude + self.index as f64 * lambda.abs().ln()).exp()
            }
        }
    }

    /// ln|a_k λ^k| for λ > 0.
    pub fn log_term(&self, lambda: f64) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_magnitude + self.index as f64 * lambda.ln()
        }
    }
}

/// Coefficient `a_k` of the toy integral `∫ exp(−x² − λx⁴) dx = Σ a_k λ^k`,
/// `a_k = √π (−1)^k (4k)! / (2^{4k} (2k)! k!) = (−1)^k Γ(2k + ½) / k!`.
pub fn toy_coefficient(k: usize) -> SeriesCoefficient {
    let log_mag = ln_gamma(2.0 * k as f64 + 0.5) - ln_factorial(k);
    let sign = if k % 2 == 0 { Sign::Positive } else { Sign::Negative };
    SeriesCoefficient::from_log(k, sign, log_mag)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    coefficients: Vec<SeriesCoefficient>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub c: f64,
    pub sigma: f64,
    /// Largest violation of `ln|a_n| ≤ ln C + n ln σ + ln n!` by the raw
    /// least-squares fit, before `C` was inflated.
    pub residual: f64,
    pub satisfied: bool,
}

impl AsymptoticSeries {
    /// Builds a series, checking that indices run 0, 1, …, N without gaps.
    pub fn new(coefficients: Vec<SeriesCoefficient>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("a series needs at least one coefficient"));
        }
        for (i, c) in coefficients.iter().enumerate() {
            if c.index != i {
                return Err(Error::invalid("coefficient indices must be contiguous from 0"));
            }
        }
        Ok(Self { coefficients })
    }

    pub fn toy(max_order: usize) -> Self {
        Self {
            coefficients: (0..=max_order).map(toy_coefficient).collect(),
        }
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(k, &v)| SeriesCoefficient::from_value(k, v))
                .collect(),
        )
    }

    /// Series with `a_k = sign_k · exp(log_mag_k)` for k = 0..=max_order.
    pub fn from_log_fn(max_order: usize, f: impl Fn(usize) -> (Sign, f64)) -> Self {
        Self {
            coefficients: (0..=max_order)
                .map(|k| {
                    let (s, l) = f(k);
                    SeriesCoefficient::from_log(k, s, l)
                })
                .collect(),
        }
    }

    pub fn max_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[SeriesCoefficient] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> Option<&SeriesCoefficient> {
        self.coefficients.get(k)
    }

    /// `Σ_{k ≤ N} a_k λ^k` with compensated summation.
    pub fn partial_sum(&self, lambda: f64, order: usize) -> Result<f64> {
        if order > self.max_order() {
            return Err(Error::OutOfRange {
                requested: order,
                available: self.max_order(),
            });
        }
        let sum: CompensatedSum = self.coefficients[..=order].iter().map(|c| c.term(lambda)).collect();
        Ok(sum.total())
    }

    /// Index of the first local minimum of `|a_k λ^k|`.
    ///
    /// A minimum at `k` needs a strictly larger term at `k + 1`, so a series
    /// whose terms keep shrinking through `max_order` is rejected.
    pub fn optimal_truncation(&self, lambda: f64) -> Result<usize> {
        if !(lambda > 0.0) {
            return Err(Error::invalid("λ must be positive"));
        }
        let logs: Vec<f64> = self.coefficients.iter().map(|c| c.log_term(lambda)).collect();
        for k in 0..logs.len().saturating_sub(1) {
            let left_ok = k == 0 || logs[k] <= logs[k - 1];
            if left_ok && logs[k] < logs[k + 1] && logs[k].is_finite() {
                return Ok(k);
            }
        }
        Err(Error::NoLocalMinimum {
            scanned: self.max_order(),
        })
    }

    /// Fits `|a_n| ≤ C σⁿ n!` by least squares of `ln|a_n| − ln n!` on `n`
    /// over orders `[N/4, N]`, then inflates `C` until the bound holds on
    /// every fitted order. Zero coefficients are left out of the fit.
    pub fn fit_strong_asymptotic(&self) -> Result<GrowthFit> {
        let n_max = self.max_order();
        if n_max < 8 {
            return Err(Error::precondition("growth fit needs max_order ≥ 8"));
        }
        let pts: Vec<(f64, f64)> = self.coefficients[n_max / 4..]
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| (c.index as f64, c.log_magnitude - ln_factorial(c.index)))
            .collect();
        if pts.len() < 2 {
            return Err(Error::precondition("growth fit needs two nonzero coefficients in [N/4, N]"));
        }
        let (slope, intercept) = least_squares(&pts);
        let residual = pts
            .iter()
            .map(|&(n, y)| y - (intercept + slope * n))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
        // 1e-9 slack keeps the bound true after rounding in the comparison
        let log_c = intercept + residual + 1e-9;
        Ok(GrowthFit {
            c: log_c.exp(),
            sigma: slope.exp(),
            residual,
            satisfied: residual < 10f64.ln(),
        })
    }
}

impl GrowthFit {
    /// Whether `|a_n| ≤ C σⁿ n!` holds for the nonzero coefficients, checked
    /// in the log domain with tolerance `tol`.
    pub fn bound_holds(&self, series: &AsymptoticSeries, orders: core::ops::RangeInclusive<usize>, tol: f64) -> bool {
        orders.filter_map(|n| series.coefficient(n)).filter(|c| !c.is_zero()).all(|c| {
            let bound = self.c.ln() + c.index as f64 * self.sigma.ln() + ln_factorial(c.index);
            c.log_magnitude <= bound + tol
        })
    }
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns `(slope, intercept)`.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
