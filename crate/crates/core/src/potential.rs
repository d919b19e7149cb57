//! Steplike potentials: equal to the left/right background outside a
//! window `[X₋, X₊]`, and given analytically or by samples inside it.

use crate::background::{Background, Side};
use crate::error::{Error, Result};
use crate::numerics::quadrature::composite_gauss;

/// Natural cubic spline through `(x_i, v_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    v: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || v.len() != n {
            return Err(Error::InvalidInput(format!("spline needs at least 3 matching samples, got {} and {}", n, v.len())));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || v.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("spline abscissae must be strictly increasing and values finite".into()));
        }
        // Tridiagonal system for the second derivatives, natural ends.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let cc = h1 / 6.0;
            let r = (v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0;
            let denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (r - a * d[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Self { x, v, m })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.v[i] + b * self.v[i + 1] + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }
}

/// How the two backgrounds are joined inside the window.
#[derive(Clone, Debug, PartialEq)]
pub enum Blend {
    /// `p₋` for `x < 0`, `p₊` for `x ≥ 0`.
    Sharp,
    /// `p₋ (1 - s) + p₊ s` with the logistic `s = 1/(1 + e^{-x/width})`.
    Logistic { width: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    /// `amplitude · sech²((x - center)/width)`
    Sech2 { amplitude: f64, center: f64, width: f64 },
    /// `amplitude · exp(-((x - center)/width)²)`
    Gaussian { amplitude: f64, center: f64, width: f64 },
}

impl Term {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Term::Sech2 { amplitude, center, width } => amplitude / ((x - center) / width).cosh().powi(2),
            Term::Gaussian { amplitude, center, width } => amplitude * (-((x - center) / width).powi(2)).exp(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Analytic { blend: Blend, terms: Vec<Term> },
    Sampled(CubicSpline),
}

#[derive(Clone, Debug)]
pub struct Potential {
    pub name: String,
    pub minus: Background,
    pub plus: Background,
    pub window: (f64, f64),
    pub shape: Shape,
}

impl Potential {
    pub fn new(name: impl Into<String>, minus: Background, plus: Background, window: (f64, f64), shape: Shape) -> Result<Self> {
        if minus.side != Side::Minus || plus.side != Side::Plus {
            return Err(Error::InvalidInput("backgrounds must be given as (minus, plus)".into()));
        }
        if !(window.0 < 0.0 && window.1 > 0.0) {
            return Err(Error::InvalidInput(format!("window [{}, {}] must contain 0 in its interior", window.0, window.1)));
        }
        if let Shape::Sampled(s) = &shape {
            let (a, b) = s.range();
            if a > window.0 || b < window.1 {
                return Err(Error::InvalidInput(format!("samples cover [{a}, {b}], window is [{}, {}]", window.0, window.1)));
            }
        }
        if let Shape::Analytic { blend: Blend::Logistic { width }, .. } = &shape {
            if !(*width > 0.0) {
                return Err(Error::InvalidInput(format!("logistic width must be positive, got {width}")));
            }
        }
        Ok(Self { name: name.into(), minus, plus, window, shape })
    }

    /// Background level a sample of `q` is compared against.
    pub fn background_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.minus.q(x)
        } else {
            self.plus.q(x)
        }
    }

    pub fn q(&self, x: f64) -> f64 {
        if x < self.window.0 {
            return self.minus.q(x);
        }
        if x > self.window.1 {
            return self.plus.q(x);
        }
        match &self.shape {
            Shape::Sampled(s) => s.eval(x),
            Shape::Analytic { blend, terms } => {
                let base = match blend {
                    Blend::Sharp => self.background_at(x),
                    Blend::Logistic { width } => {
                        let s = 0.5 * (1.0 + (0.5 * x / width).tanh());
                        self.minus.q(x) * (1.0 - s) + self.plus.q(x) * s
                    }
                };
                base + terms.iter().map(|t| t.eval(x)).sum::<f64>()
            }
        }
    }

    /// Points where `q` may be discontinuous; ODE steps stop there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![self.window.0];
        if matches!(self.shape, Shape::Analytic { blend: Blend::Sharp, .. } | Shape::Sampled(_)) {
            b.push(0.0);
        }
        b.push(self.window.1);
        b
    }

    /// `(∫_{X₋}^0 |q - p₋|(1 + x²) dx, ∫_0^{X₊} |q - p₊|(1 + x²) dx)`.
    pub fn second_moments(&self) -> (f64, f64) {
        let m = |a: f64, b: f64| {
            let (xs, ws) = composite_gauss(a, b, ((b - a) * 4.0).ceil() as usize, 12);
            xs.iter().zip(&ws).map(|(&x, w)| w * (self.q(x) - self.background_at(x)).abs() * (1.0 + x * x)).sum::<f64>()
        };
        (m(self.window.0, 0.0), m(0.0, self.window.1))
    }

    /// `∫ (q − p±)` over the half-line on `side` of `x`: `[x, ∞)` for plus,
    /// `(−∞, x]` for minus. With `abs`, of `|q − p±|`.
    pub fn tail_integral(&self, side: Side, x: f64, abs: bool) -> f64 {
        let (a, b) = match side {
            Side::Plus => (x, self.window.1),
            Side::Minus => (self.window.0, x),
        };
        if b <= a {
            return 0.0;
        }
        let bg = self.background(side);
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints().into_iter().filter(|&c| c > a && c < b));
        cuts.push(b);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (xs, ws) = composite_gauss(w[0], w[1], ((w[1] - w[0]) * 4.0).ceil().max(1.0) as usize, 12);
            total += xs
                .iter()
                .zip(&ws)
                .map(|(&t, w)| {
                    let d = self.q(t) - bg.q(t);
                    w * if abs { d.abs() } else { d }
                })
                .sum::<f64>();
        }
        total
    }

    /// Lower bound for eigenvalues: the minimum of `q` over the window and one
    /// background period on each side.
    pub fn min_q(&self) -> f64 {
        let lo = self.window.0 - self.minus.period().unwrap_or(0.0);
        let hi = self.window.1 + self.plus.period().unwrap_or(0.0);
        let n = (((hi - lo) * 200.0).ceil() as usize).max(400);
        (0..=n).map(|i| self.q(lo + (hi - lo) * i as f64 / n as f64)).fold(f64::INFINITY, f64::min)
    }

    pub fn background(&self, side: Side) -> &Background {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    /// Samples `q` on a uniform grid (for serialization).
    pub fn samples(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = self.window;
        let xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        let qs = xs.iter().map(|&x| self.q(x)).collect();
        (xs, qs)
    }
}

/// The potentials used throughout the test-suite and the CLI's builtin names.
pub mod builtin {
    use super::*;

    pub fn free(window: f64) -> Result<Potential> {
        let shape = Shape::Analytic { blend: Blend::Sharp, terms: vec![] };
        Potential::new("free", Background::constant(Side::Minus, 0.0)?, Background::constant(Side::Plus, 0.0)?, (-window, window), shape)
    }

    /// `-2 sech² x`: reflectionless, one eigenvalue at `-1`.
    pub fn sech2(window: f64) -> Result<Potential> {
        let shape = Shape::Analytic { blend: Blend::Sharp, terms: vec![Term::Sech2 { amplitude: -2.0, center: 0.0, width: 1.0 }] };
        Potential::new("sech2", Background::constant(Side::Minus, 0.0)?, Background::constant(Side::Plus, 0.0)?, (-window, window), shape)
    }

    /// Sharp step from `c_minus` to `c_plus` at the origin.
    pub fn step(c_minus: f64, c_plus: f64, window: f64) -> Result<Potential> {
        let shape = Shape::Analytic { blend: Blend::Sharp, terms: vec![] };
        Potential::new("step", Background::constant(Side::Minus, c_minus)?, Background::constant(Side::Plus, c_plus)?, (-window, window), shape)
    }

    /// Logistic step of the given width.
    pub fn smooth_step(c_minus: f64, c_plus: f64, width: f64, window: f64) -> Result<Potential> {
        let shape = Shape::Analytic { blend: Blend::Logistic { width }, terms: vec![] };
        Potential::new("smooth_step", Background::constant(Side::Minus, c_minus)?, Background::constant(Side::Plus, c_plus)?, (-window, window), shape)
    }

    /// Gaussian bump on top of equal backgrounds on both sides.
    pub fn bump(bg: &Background, amplitude: f64, width: f64, window: f64) -> Result<Potential> {
        let shape = Shape::Analytic { blend: Blend::Sharp, terms: vec![Term::Gaussian { amplitude, center: 0.0, width }] };
        Potential::new("bump", bg.with_side(Side::Minus), bg.with_side(Side::Plus), (-window, window), shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_cubic_interior() {
        let xs: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let vs: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(xs, vs).unwrap();
        for &t in &[-1.23, 0.0, 0.71] {
            assert!((s.eval(t) - t.sin()).abs() < 1e-5);
        }
    }

    #[test]
    fn matching_rule_outside_window() {
        let p = builtin::smooth_step(0.0, 1.0, 0.5, 20.0).unwrap();
        assert_eq!(p.q(-25.0), 0.0);
        assert_eq!(p.q(25.0), 1.0);
        assert!((p.q(0.0) - 0.5).abs() < 1e-15);
        let s = builtin::step(0.0, 1.0, 5.0).unwrap();
        assert_eq!(s.breakpoints(), vec![-5.0, 0.0, 5.0]);
        let (l, r) = s.second_moments();
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_window() {
        assert!(builtin::free(-1.0).is_err());
    }

    #[test]
    fn sech2_minimum() {
        let p = builtin::sech2(10.0).unwrap();
        assert!((p.min_q() + 2.0).abs() < 1e-12);
    }
}
