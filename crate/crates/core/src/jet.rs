//! Truncated Taylor series ("jets") in one variable.
//!
//! A [`Jet`] holds the Taylor coefficients `c_k` of `f(t0 + h) = Σ c_k h^k`
//! up to [`MAX_ORDER`]. Products, quotients and `exp` follow the usual
//! recurrences, so derivatives of mollifier-type functions come out at
//! rounding-level accuracy instead of finite-difference accuracy.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

/// Highest derivative order carried by a jet.
pub const MAX_ORDER: usize = 8;
const LEN: usize = MAX_ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; LEN]);

impl Jet {
    pub const ZERO: Jet = Jet([0.0; LEN]);

    pub fn constant(c: f64) -> Self {
        let mut j = Self::ZERO;
        j.0[0] = c;
        j
    }

    /// Jet of the affine map `h ↦ a + b h`.
    pub fn affine(a: f64, b: f64) -> Self {
        let mut j = Self::ZERO;
        j.0[0] = a;
        j.0[1] = b;
        j
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `d^k f / dt^k` at the expansion point.
    pub fn derivative(&self, k: usize) -> Option<f64> {
        if k > MAX_ORDER {
            return None;
        }
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        Some(self.0[k] * fact)
    }

    pub fn scale(mut self, s: f64) -> Self {
        for c in &mut self.0 {
            *c *= s;
        }
        self
    }

    /// Re-expands in the variable `h' = h / r`, i.e. `c_k ← c_k r^k`.
    pub fn rescale_variable(mut self, r: f64) -> Self {
        let mut p = 1.0;
        for c in &mut self.0 {
            *c *= p;
            p *= r;
        }
        self
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    pub fn exp(&self) -> Self {
        let mut e = Self::ZERO;
        e.0[0] = self.0[0].exp();
        if e.0[0] == 0.0 {
            return Self::ZERO;
        }
        for k in 1..LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.0[j] * e.0[k - j];
            }
            e.0[k] = acc / k as f64;
        }
        e
    }

    /// Term-by-term antiderivative with constant term `c0` (drops the top order).
    pub fn integrate(&self, c0: f64) -> Self {
        let mut out = Self::ZERO;
        out.0[0] = c0;
        for k in 1..LEN {
            out.0[k] = self.0[k - 1] / k as f64;
        }
        out
    }

    /// Jet of `f^{(k)}`: shifts coefficients down by `k`.
    pub fn differentiate(&self, k: usize) -> Self {
        let mut out = Self::ZERO;
        for i in 0..LEN.saturating_sub(k) {
            let mut falling = 1.0;
            for m in 0..k {
                falling *= (i + k - m) as f64;
            }
            out.0[i] = self.0[i + k] * falling;
        }
        out
    }

    /// Evaluates the truncated series at offset `h`.
    pub fn eval(&self, h: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }

    /// Jet at `t0` of the polynomial `Σ p_i t^i`.
    pub fn polynomial(coeffs: &[f64], t0: f64) -> Self {
        let mut out = Self::ZERO;
        // Horner in jet arithmetic with the variable t0 + h.
        let var = Jet::affine(t0, 1.0);
        for &c in coeffs.iter().rev() {
            out = out * var + Jet::constant(c);
        }
        out
    }
}

impl Index<usize> for Jet {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Jet {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::ZERO;
        for k in 0..LEN {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.0[j] * rhs.0[k - j];
            }
            out.0[k] = acc;
        }
        out
    }
}

impl core::ops::Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut q = Jet::ZERO;
        let b0 = rhs.0[0];
        for k in 0..LEN {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= rhs.0[j] * q.0[k - j];
            }
            q.0[k] = acc / b0;
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_identity_is_exponential_series() {
        let e = Jet::affine(0.0, 1.0).exp();
        let mut fact = 1.0;
        for k in 0..LEN {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e[k] - 1.0 / fact).abs() < 1e-16);
        }
    }

    #[test]
    fn quotient_inverts_product() {
        let a = Jet::polynomial(&[1.0, -2.0, 0.5, 3.0], 0.3);
        let b = Jet::affine(0.7, 1.0).exp();
        let back = (a * b) / b;
        for k in 0..LEN {
            assert!((back[k] - a[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_jet_gives_shifted_coefficients() {
        // (t)^3 at t0 = 2: 8 + 12h + 6h² + h³
        let j = Jet::polynomial(&[0.0, 0.0, 0.0, 1.0], 2.0);
        assert_eq!(&j.0[..5], &[8.0, 12.0, 6.0, 1.0, 0.0]);
        assert_eq!(j.derivative(2), Some(12.0));
    }

    #[test]
    fn differentiate_shifts() {
        let j = Jet::polynomial(&[1.0, 1.0, 1.0, 1.0], 0.0);
        let d = j.differentiate(1);
        assert_eq!(&d.0[..4], &[1.0, 2.0, 3.0, 0.0]);
    }
}
