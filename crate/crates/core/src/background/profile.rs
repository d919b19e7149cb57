//! Periodic background profiles stored as truncated Fourier series.

use std::f64::consts::PI;

use super::elliptic::{elliptic_k, jacobi_sn};
use crate::error::{Error, Result};

/// `p(x) = a₀ + Σₙ (aₙ cos(2πnx/ℓ) + bₙ sin(2πnx/ℓ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierProfile {
    pub period: f64,
    pub mean: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierProfile {
    /// Interpolates equispaced samples `p(jℓ/N)`, `j = 0..N`, over one period.
    pub fn from_samples(samples: &[f64], period: f64) -> Result<Self> {
        let n = samples.len();
        if n < 4 || !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidInput(format!("degenerate period: {n} samples over length {period}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite profile sample".into()));
        }
        let harmonics = (n - 1) / 2;
        let mean = samples.iter().sum::<f64>() / n as f64;
        let mut cos = Vec::with_capacity(harmonics);
        let mut sin = Vec::with_capacity(harmonics);
        for h in 1..=harmonics {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let t = 2.0 * PI * (h * j) as f64 / n as f64;
                a += v * t.cos();
                b += v * t.sin();
            }
            cos.push(2.0 * a / n as f64);
            sin.push(2.0 * b / n as f64);
        }
        let mut p = Self { period, mean, cos, sin };
        p.trim(1e-15);
        Ok(p)
    }

    /// Samples a smooth periodic function on `n` points.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> Result<Self> {
        let samples: Vec<f64> = (0..n).map(|j| f(j as f64 * period / n as f64)).collect();
        Self::from_samples(&samples, period)
    }

    /// One-gap Lamé profile `2m sn²(x + shift | m)` of period `2K(m)`; its
    /// spectrum is `[m, 1] ∪ [1 + m, ∞)`.
    pub fn lame(m: f64, shift: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidInput(format!("Lamé parameter must lie in (0, 1), got {m}")));
        }
        let period = 2.0 * elliptic_k(m);
        Self::from_fn(|x| 2.0 * m * jacobi_sn(x + shift, m).powi(2), period, 128)
    }

    pub fn constant(c: f64, period: f64) -> Self {
        Self { period, mean: c, cos: vec![], sin: vec![] }
    }

    fn trim(&mut self, tol: f64) {
        while let (Some(a), Some(b)) = (self.cos.last(), self.sin.last()) {
            if a.abs() < tol && b.abs() < tol {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
    }

    pub fn harmonics(&self) -> usize {
        self.cos.len()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let t = 2.0 * PI * x / self.period;
        let (s1, c1) = t.sin_cos();
        let (mut s, mut c) = (s1, c1);
        let mut v = self.mean;
        for (a, b) in self.cos.iter().zip(&self.sin) {
            v += a * c + b * s;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        v
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.deriv_n(x, 1)
    }

    /// `k`-th derivative.
    pub fn deriv_n(&self, x: f64, k: u32) -> f64 {
        if k == 0 {
            return self.eval(x);
        }
        let w = 2.0 * PI / self.period;
        let t = w * x;
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| {
                let n = (i + 1) as f64;
                let (s, c) = (n * t).sin_cos();
                // d^k/dt^k of (a cos + b sin) cycles through four phases.
                let v = match k % 4 {
                    1 => -a * s + b * c,
                    2 => -a * c - b * s,
                    3 => a * s - b * c,
                    _ => a * c + b * s,
                };
                (n * w).powi(k as i32) * v
            })
            .sum()
    }

    /// `x ↦ p(-x)`.
    pub fn reflect(&self) -> Self {
        Self { period: self.period, mean: self.mean, cos: self.cos.clone(), sin: self.sin.iter().map(|b| -b).collect() }
    }

    /// `x ↦ p(x + d)`.
    pub fn shift(&self, d: f64) -> Self {
        let w = 2.0 * PI / self.period;
        let mut cos = Vec::with_capacity(self.cos.len());
        let mut sin = Vec::with_capacity(self.sin.len());
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let (s, c) = (((i + 1) as f64) * w * d).sin_cos();
            cos.push(a * c + b * s);
            sin.push(b * c - a * s);
        }
        Self { period: self.period, mean: self.mean, cos, sin }
    }

    /// Samples over one period (for serialization).
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.eval(j as f64 * self.period / n as f64)).collect()
    }
}
