//! Row-by-row Nyström solution of
//! `K±(x,y) + F±(x,y) ± ∫_x^{±∞} K±(x,t) F±(t,y) dt = 0`.
//!
//! When `q = p±` beyond `X±` the kernel `K±(x,·)` vanishes past
//! `2X± − x`, so each row lives on a finite interval with no cutoff error.

use nalgebra::{DMatrix, DVector};

use super::kernel::GlmKernel;
use crate::background::Side;
use crate::error::{Error, Result};
use crate::numerics::quadrature::composite_gauss;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NystromConfig {
    /// Panel width of the composite Gauss rule.
    pub panel: f64,
    /// Gauss nodes per panel.
    pub order: usize,
}

impl Default for NystromConfig {
    fn default() -> Self {
        Self { panel: 1.0, order: 16 }
    }
}

impl NystromConfig {
    pub fn refined(&self) -> Self {
        Self { panel: self.panel / 2.0, order: self.order }
    }

    pub fn coarsened(&self) -> Self {
        Self { panel: self.panel * 2.0, order: self.order }
    }
}

/// `K±(x,·)` at the Nyström nodes of one row.
#[derive(Clone, Debug)]
pub struct Row {
    pub x: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    /// `K±(x, x)`.
    pub diagonal: f64,
    /// Relative residual of the discrete system.
    pub residual: f64,
}

pub struct GlmSolver<'a> {
    pub kernel: &'a GlmKernel,
    /// `[X₋, X₊]`: the potential equals its backgrounds outside.
    pub window: (f64, f64),
    pub config: NystromConfig,
}

impl<'a> GlmSolver<'a> {
    pub fn new(kernel: &'a GlmKernel, window: (f64, f64), config: NystromConfig) -> Self {
        Self { kernel, window, config }
    }

    /// Integration interval of row `x` (empty once `x` is past the window).
    pub fn support(&self, x: f64) -> (f64, f64) {
        match self.kernel.side {
            Side::Plus => (x, (2.0 * self.window.1 - x).max(x)),
            Side::Minus => ((2.0 * self.window.0 - x).min(x), x),
        }
    }

    fn rule(&self, x: f64) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = self.support(x);
        if b - a < 1e-14 {
            return (Vec::new(), Vec::new());
        }
        let panels = ((b - a) / self.config.panel).ceil().max(1.0) as usize;
        composite_gauss(a, b, panels, self.config.order)
    }

    pub fn row(&self, x: f64) -> Result<Row> {
        let (nodes, weights) = self.rule(x);
        let n = nodes.len();
        if n == 0 {
            return Ok(Row { x, nodes, weights, values: Vec::new(), diagonal: 0.0, residual: 0.0 });
        }
        // One block over the nodes and x itself: F(t,t), F(x,t) and F(x,x).
        let mut ts = nodes.clone();
        ts.push(x);
        let f = self.kernel.matrix(&ts, &ts)?;
        // Symmetric form (I + W½FW½)(W½k) = -W½F(x,·): Cholesky while positive.
        let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let a = DMatrix::from_fn(n, n, |i, j| sw[i] * f[(i, j)] * sw[j] + if i == j { 1.0 } else { 0.0 });
        let b = DVector::from_iterator(n, (0..n).map(|i| -sw[i] * f[(n, i)]));
        let y = match a.clone().cholesky() {
            Some(c) => c.solve(&b),
            None => a.clone().lu().solve(&b).ok_or_else(|| Error::Singular(format!("GLM system at x = {x}")))?,
        };
        let k = DVector::from_iterator(n, (0..n).map(|i| y[i] / sw[i]));
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { x });
        }
        let diagonal = -f[(n, n)] - (0..n).map(|i| weights[i] * k[i] * f[(n, i)]).sum::<f64>();
        let residual = (&a * &y - &b).amax() / b.amax().max(y.amax()).max(1e-300);
        Ok(Row { x, nodes, weights, values: k.iter().copied().collect(), diagonal, residual })
    }

    /// `K±(x, y)` for each `y` by Nyström interpolation.
    pub fn kernel_at(&self, row: &Row, ys: &[f64]) -> Result<Vec<f64>> {
        if row.nodes.is_empty() {
            return Ok(vec![0.0; ys.len()]);
        }
        let fx = self.kernel.matrix(&[row.x], ys)?;
        let ft = self.kernel.matrix(&row.nodes, ys)?;
        Ok((0..ys.len())
            .map(|j| {
                let (a, b) = self.support(row.x);
                if ys[j] < a - 1e-12 || ys[j] > b + 1e-12 {
                    return 0.0;
                }
                let s: f64 = (0..row.nodes.len()).map(|i| row.weights[i] * row.values[i] * ft[(i, j)]).sum();
                -fx[(0, j)] - s
            })
            .collect())
    }

    /// `K±(x, x)`.
    pub fn diagonal(&self, x: f64) -> Result<f64> {
        Ok(self.row(x)?.diagonal)
    }

    /// Smallest eigenvalue of the symmetrized discrete operator
    /// `I + W^{1/2} F W^{1/2}` on the row interval of `x`.
    pub fn min_eigenvalue(&self, x: f64) -> Result<f64> {
        let (nodes, weights) = self.rule(x);
        if nodes.is_empty() {
            return Ok(1.0);
        }
        let f = self.kernel.matrix(&nodes, &nodes)?;
        let n = nodes.len();
        let s: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let a = DMatrix::from_fn(n, n, |i, j| s[i] * f[(i, j)] * s[j] + if i == j { 1.0 } else { 0.0 });
        let a = (&a + a.transpose()) * 0.5;
        Ok(a.symmetric_eigenvalues().min())
    }
}

/// `K±(x,x)` on a uniform grid and `q̃± = p± ∓ 2 dK±(x,x)/dx` on its interior.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub side: Side,
    pub x: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub q: Vec<f64>,
    /// Largest relative residual over the rows.
    pub residual: f64,
}

/// Reconstructs on `[a, b]` with spacing near `h`; `K(x,x)` is also
/// sampled three steps past each end for the seven-point derivative.
pub fn reconstruct(solver: &GlmSolver, a: f64, b: f64, h: f64) -> Result<Reconstruction> {
    let n = ((b - a) / h).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..n + 7).map(|i| a + (i as f64 - 3.0) * h).collect();
    let rows: Vec<Row> = xs.iter().map(|&x| solver.row(x)).collect::<Result<_>>()?;
    let diag: Vec<f64> = rows.iter().map(|r| r.diagonal).collect();
    let residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let sign = solver.kernel.side.sign();
    let bg = &solver.kernel.background;
    let mut x = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    for i in 3..n + 4 {
        let d = (45.0 * (diag[i + 1] - diag[i - 1]) - 9.0 * (diag[i + 2] - diag[i - 2]) + (diag[i + 3] - diag[i - 3])) / (60.0 * h);
        x.push(xs[i]);
        q.push(bg.q(xs[i]) - sign * 2.0 * d);
    }
    Ok(Reconstruction { side: solver.kernel.side, x, diagonal: diag[3..n + 4].to_vec(), q, residual })
}

/// `q̃±` at isolated points, each from its own seven-point stencil of spacing `h`.
pub fn reconstruct_points(solver: &GlmSolver, xs: &[f64], h: f64) -> Result<Vec<f64>> {
    let sign = solver.kernel.side.sign();
    xs.iter()
        .map(|&x| {
            let d: Vec<f64> = (-3..=3).map(|j| solver.diagonal(x + j as f64 * h)).collect::<Result<_>>()?;
            let dk = (45.0 * (d[4] - d[2]) - 9.0 * (d[5] - d[1]) + (d[6] - d[0])) / (60.0 * h);
            Ok(solver.kernel.background.q(x) - sign * 2.0 * dk)
        })
        .collect()
}
