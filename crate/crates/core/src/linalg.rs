//! Dense LU solve with a condition estimate, and polynomial roots.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// LU factors with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    singular: bool,
    norm1: f64,
}

impl Lu {
    pub fn new(a: &Matrix) -> Self {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let f = lu.get(i, k) / pivot;
                lu.data[i * n + k] = f;
                for j in k + 1..n {
                    lu.data[i * n + j] -= f * lu.data[k * n + j];
                }
            }
        }
        Self {
            norm1: a.norm1(),
            lu,
            perm,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu.get(i, j) * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu.get(i, j) * x[j];
            }
            x[i] /= self.lu.get(i, i);
        }
        x
    }

    /// `‖A‖₁ ‖A⁻¹‖₁`, with the inverse formed column by column.
    pub fn condition_number(&self) -> f64 {
        if self.singular {
            return f64::INFINITY;
        }
        let n = self.lu.n;
        let mut inv_norm: f64 = 0.0;
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            let s: f64 = col.iter().map(|v| v.abs()).sum();
            inv_norm = inv_norm.max(s);
        }
        let c = self.norm1 * inv_norm;
        if c.is_finite() {
            c
        } else {
            f64::INFINITY
        }
    }
}

/// Evaluates `Σ c_i z^i` and its derivative.
pub fn poly_eval(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of `Σ c_i z^i` (coefficients low to high) by
/// Aberth–Ehrlich iteration. Trailing zero coefficients are dropped.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let mut roots = Vec::with_capacity(deg);
    // exact zero roots
    let mut lead_zeros = 0;
    while lead_zeros < deg && c[lead_zeros] == 0.0 {
        lead_zeros += 1;
    }
    roots.extend(core::iter::repeat(Complex64::zero()).take(lead_zeros));
    let c = &c[lead_zeros..];
    let deg = c.len() - 1;
    if deg == 0 {
        return roots;
    }
    let lead = c[deg];
    // Fujiwara-style bound on root magnitude, and a lower bound from the reversed polynomial
    let upper = (0..deg)
        .map(|i| (c[i] / lead).abs().powf(1.0 / (deg - i) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let lower = {
        let c0 = c[0];
        (1..=deg)
            .map(|i| (c[i] / c0).abs().powf(1.0 / i as f64))
            .fold(0.0, f64::max)
            .recip()
            * 0.5
    };
    let radius = (upper * lower).sqrt().max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * (k as f64 + 0.25) / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let (p, dp) = poly_eval(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    roots.extend(z);
    roots
}
