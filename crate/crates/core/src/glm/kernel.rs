//! The GLM kernel `F± = F_r + F_h + F_d` assembled from scattering data.

use nalgebra::DMatrix;

use crate::background::{Background, Branch, Regularization, Side, SpecPoint, WeylSolution};
use crate::direct::ScatteringData;
use crate::error::{Error, Result};
use crate::numerics::C64;

/// One continuous-spectrum node: contributes `Re(coef ψ(x) ψ(y))`.
#[derive(Clone, Debug)]
struct Node {
    psi: WeylSolution,
    coef: C64,
}

/// Continuous part tabulated in `s = x + y` when every `ψ` is an exponential.
#[derive(Clone, Debug)]
struct Hankel {
    s0: f64,
    h: f64,
    values: Vec<f64>,
}

impl Hankel {
    fn eval(&self, s: f64) -> f64 {
        let n = self.values.len();
        let u = (s - self.s0) / self.h;
        let i = (u.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
        // 6-point Lagrange interpolation on nodes i..i+6
        let mut acc = 0.0;
        for a in 0..6 {
            let mut l = 1.0;
            for b in 0..6 {
                if a != b {
                    l *= (u - (i + b) as f64) / (a as f64 - b as f64);
                }
            }
            acc += l * self.values[i + a];
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct GlmKernel {
    pub side: Side,
    pub background: Background,
    nodes: Vec<Node>,
    discrete: Vec<(WeylSolution, f64)>,
    hankel: Option<Hankel>,
    /// A Dirichlet pole of `ψ±` lies inside the simple spectrum of the other
    /// side, so the regularized `δ ψ±` was used there.
    pub pole_in_simple_spectrum: bool,
}

impl GlmKernel {
    /// Assembles `F±` for rows `x` in `window = [X₋, X₊]`.
    pub fn new(data: &ScatteringData, minus: &Background, plus: &Background, side: Side, window: (f64, f64)) -> Result<Self> {
        let (own, other) = match side {
            Side::Plus => (plus, minus),
            Side::Minus => (minus, plus),
        };
        let mut nodes = Vec::new();
        for piece in data.bands(side) {
            for i in 0..piece.lambda.len() {
                let p = SpecPoint::Upper(piece.lambda[i]);
                let g = own.g(p)?;
                let psi = own.weyl(p, Branch::Weyl, Regularization::None)?;
                nodes.push(Node { coef: piece.r[i] * (piece.weight[i] * g.im / std::f64::consts::PI), psi });
            }
        }
        let mut pole_in_simple_spectrum = false;
        for piece in data.bands(side.opposite()) {
            if data.in_sigma2(piece) {
                continue;
            }
            // A pole of ψ± inside this piece is cancelled by a zero of |T∓|²;
            // carry it as δ ψ± with weight 1/δ² instead.
            let pole = own.dirichlet.iter().any(|d| d.mu > piece.lo && d.mu < piece.hi);
            pole_in_simple_spectrum |= pole;
            let reg = if pole { Regularization::Delta } else { Regularization::None };
            for i in 0..piece.lambda.len() {
                let p = SpecPoint::Upper(piece.lambda[i]);
                let g = other.g(p)?;
                let psi = own.weyl(p, Branch::Weyl, reg)?;
                let d2 = if pole { own.delta(p, reg).norm_sqr() } else { 1.0 };
                let coef = piece.t[i].norm_sqr() * piece.weight[i] * g.im / (2.0 * std::f64::consts::PI * d2);
                nodes.push(Node { coef: C64::new(coef, 0.0), psi });
            }
        }
        let gammas = data.gamma(side);
        let mut discrete = Vec::new();
        for (b, gamma) in data.bound.iter().zip(gammas) {
            let psi = own.weyl(SpecPoint::Upper(b.lambda), Branch::Weyl, Regularization::Delta)?;
            discrete.push((psi, gamma * gamma));
        }
        if nodes.iter().any(|n| !n.coef.is_finite()) {
            return Err(Error::NonFinite { x: f64::NAN });
        }
        let mut k = Self { side, background: own.clone(), nodes, discrete, hankel: None, pole_in_simple_spectrum };
        if own.is_constant() {
            // Row supports reach x + y = 4X₋ − 2X₊ (minus) and 4X₊ − 2X₋ (plus).
            let (a, b) = window;
            k.hankel = Some(k.tabulate(4.0 * a - 2.0 * b - 1.0, 4.0 * b - 2.0 * a + 1.0));
        }
        Ok(k)
    }

    fn tabulate(&self, a: f64, b: f64) -> Hankel {
        let kmax = self.nodes.iter().fold(0.0f64, |m, n| m.max(n.psi.m().norm()));
        let h = 0.1 / (1.0 + kmax);
        let n = ((b - a) / h).ceil() as usize + 6;
        let s0 = a - 2.0 * h;
        // ψ(x)ψ(y) = a² e^{m (x + y)} for exponentials.
        let coefs: Vec<(C64, C64)> = self.nodes.iter().map(|nd| (nd.coef * nd.psi.a * nd.psi.a, nd.psi.m())).collect();
        let values = (0..n)
            .map(|i| {
                let s = s0 + i as f64 * h;
                coefs.iter().map(|(c, m)| (c * (m * s).exp()).re).sum()
            })
            .collect();
        Hankel { s0, h, values }
    }

    fn discrete_part(&self, x: f64, y: f64) -> Result<f64> {
        let mut v = 0.0;
        for (psi, g2) in &self.discrete {
            v += g2 * (psi.eval(x)?.value * psi.eval(y)?.value).re;
        }
        Ok(v)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let cont = match &self.hankel {
            Some(h) => h.eval(x + y),
            None => {
                let mut acc = 0.0;
                for n in &self.nodes {
                    acc += (n.coef * n.psi.eval(x)?.value * n.psi.eval(y)?.value).re;
                }
                acc
            }
        };
        Ok(cont + self.discrete_part(x, y)?)
    }

    fn psi_matrix(&self, xs: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let n = self.nodes.len();
        let mut re = DMatrix::zeros(xs.len(), n);
        let mut im = DMatrix::zeros(xs.len(), n);
        for (j, nd) in self.nodes.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                let v = nd.psi.eval(x)?.value;
                re[(i, j)] = v.re;
                im[(i, j)] = v.im;
            }
        }
        Ok((re, im))
    }

    /// `F(xs_i, ys_j)`.
    pub fn matrix(&self, xs: &[f64], ys: &[f64]) -> Result<DMatrix<f64>> {
        let mut f = match &self.hankel {
            Some(h) => DMatrix::from_fn(xs.len(), ys.len(), |i, j| h.eval(xs[i] + ys[j])),
            None => {
                let x = self.psi_matrix(xs)?;
                let y = if xs == ys { x.clone() } else { self.psi_matrix(ys)? };
                self.continuous(&x, &y)
            }
        };
        self.add_discrete(&mut f, xs, ys)?;
        Ok(f)
    }

    /// `Re(Ψx diag(c) Ψyᵀ)` from split real and imaginary parts.
    fn continuous(&self, x: &(DMatrix<f64>, DMatrix<f64>), y: &(DMatrix<f64>, DMatrix<f64>)) -> DMatrix<f64> {
        let (xr, xi) = x;
        let (yr, yi) = y;
        let mut ar = xr.clone();
        let mut ai = xi.clone();
        for (j, nd) in self.nodes.iter().enumerate() {
            let c = nd.coef;
            for i in 0..xr.nrows() {
                ar[(i, j)] = xr[(i, j)] * c.re - xi[(i, j)] * c.im;
                ai[(i, j)] = xr[(i, j)] * c.im + xi[(i, j)] * c.re;
            }
        }
        &ar * yr.transpose() - &ai * yi.transpose()
    }

    fn add_discrete(&self, f: &mut DMatrix<f64>, xs: &[f64], ys: &[f64]) -> Result<()> {
        for (psi, g2) in &self.discrete {
            let ux: Vec<f64> = xs.iter().map(|&x| psi.eval(x).map(|s| s.value.re)).collect::<Result<_>>()?;
            let uy: Vec<f64> = if xs == ys { ux.clone() } else { ys.iter().map(|&y| psi.eval(y).map(|s| s.value.re)).collect::<Result<_>>()? };
            for i in 0..xs.len() {
                for j in 0..ys.len() {
                    f[(i, j)] += g2 * ux[i] * uy[j];
                }
            }
        }
        Ok(())
    }

    /// Number of continuous-spectrum quadrature nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn has_discrete(&self) -> bool {
        !self.discrete.is_empty()
    }
}
