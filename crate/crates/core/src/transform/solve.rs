//! The transformation-kernel integral equation solved directly from `q`.
//!
//! In `u = (x+s)/2`, `v = (s−x)/2` (plus side) the kernel `H(u,v) = K₊(x,s)` obeys
//! `H(u,v) = ½ Σ_E ω_E Y_E(u−v) Y_E(u+v) [∫_u^∞ q̂ Y_E² + 2∫_u^∞dα ∫_0^v q̂(α−β) Y_E(α−β) Y_E(α+β) H(α,β) dβ]`
//! with `q̂ = q − p₊` and `ω_E = A_E²/P'(E)`. `H` vanishes for `u ≥ X₊`, so the
//! solution marches down in `u` from there with the trapezoid rule in both
//! variables (implicit in the new corner value) and is Richardson-extrapolated
//! from steps `h` and `h/2`. The minus side is the plus side of the mirrored
//! problem: `K₋(x,y) = K^r₊(−x,−y)`.

use super::edge::EdgeResidueKernel;
use crate::background::{Background, Side};
use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_legendre;
use crate::potential::Potential;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformConfig {
    /// Coarse lattice step; the fine solve uses half of it.
    pub step: f64,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self { step: 0.02 }
    }
}

impl TransformConfig {
    pub fn refined(&self) -> Self {
        Self { step: self.step / 2.0 }
    }
}

/// `K±(x,y)` for `±y ≥ ±x` on a `(u,v)` lattice; zero elsewhere.
#[derive(Clone, Debug)]
pub struct TriangularKernel {
    pub side: Side,
    /// Top of the lattice `u₀ = X₊` (mirrored coordinates on the minus side).
    u_top: f64,
    h: f64,
    nu: usize,
    nv: usize,
    values: Vec<f64>,
    /// Largest Richardson correction over the requested rows.
    pub error: f64,
}

struct Lattice {
    u_top: f64,
    h: f64,
    nu: usize,
    nv: usize,
    values: Vec<f64>,
}

/// The problem in plus-side coordinates.
struct Problem<'a> {
    qhat: Box<dyn Fn(f64) -> f64 + 'a>,
    edges: EdgeResidueKernel,
    top: f64,
    breaks: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(pot: &'a Potential, side: Side) -> Result<Self> {
        let (a, b) = pot.window;
        match side {
            Side::Plus => {
                let bg = pot.plus.clone();
                Ok(Self { qhat: Box::new(move |x| pot.q(x) - bg.q(x)), edges: EdgeResidueKernel::new(&pot.plus)?, top: b, breaks: pot.breakpoints() })
            }
            Side::Minus => {
                let bg: Background = pot.minus.reflected();
                let edges = EdgeResidueKernel::new(&bg)?;
                let breaks = pot.breakpoints().iter().map(|x| -x).collect();
                Ok(Self { qhat: Box::new(move |x| pot.q(-x) - bg.q(x)), edges, top: -a, breaks })
            }
        }
    }

    /// `∫_{u_i}^{u_top} q̂ Y_E²` at every lattice `u_i`, by Gauss rules per cell.
    fn first_terms(&self, h: f64, nu: usize) -> Result<Vec<Vec<f64>>> {
        let (gx, gw) = gauss_legendre(8);
        let mut out = Vec::with_capacity(self.edges.terms.len());
        for term in &self.edges.terms {
            let mut col = vec![0.0; nu];
            for i in 1..nu {
                let hi = self.top - (i - 1) as f64 * h;
                let lo = hi - h;
                let mut cuts = vec![lo];
                cuts.extend(self.breaks.iter().copied().filter(|&c| c > lo + 1e-14 && c < hi - 1e-14));
                cuts.push(hi);
                let mut s = 0.0;
                for w in cuts.windows(2) {
                    let (m, r) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                    for (t, wt) in gx.iter().zip(&gw) {
                        let x = m + r * t;
                        let y = term.y(x)?;
                        s += wt * r * (self.qhat)(x) * y * y;
                    }
                }
                col[i] = col[i - 1] + s;
            }
            out.push(col);
        }
        Ok(out)
    }

    fn march(&self, h: f64, u_min: f64, v_max: f64) -> Result<Lattice> {
        let nu = ((self.top - u_min) / h).round() as usize + 1;
        let nv = (v_max / h).round() as usize + 1;
        let ne = self.edges.terms.len();
        // x-lattice x_m = top − m h, m ∈ [−(nv−1), nu+nv−2]
        let off = nv - 1;
        let nx = nu + 2 * nv;
        let xs: Vec<f64> = (0..nx).map(|k| self.top - (k as f64 - off as f64) * h).collect();
        let qh: Vec<f64> = xs.iter().map(|&x| (self.qhat)(x)).collect();
        let ys: Vec<Vec<f64>> = self.edges.terms.iter().map(|t| xs.iter().map(|&x| t.y(x)).collect::<Result<_>>()).collect::<Result<_>>()?;
        let w: Vec<f64> = self.edges.terms.iter().map(|t| t.weight()).collect();
        let first = self.first_terms(h, nu)?;
        let mut values = vec![0.0; nu * nv];
        let mut phi_prev = vec![vec![0.0; nv]; ne];
        let mut psi_prev = vec![vec![0.0; nv]; ne];
        let mut phi = vec![vec![0.0; nv]; ne];
        let mut psi = vec![vec![0.0; nv]; ne];
        let mut g_prev = vec![0.0; ne];
        let hh = 0.5 * h;
        for i in 1..nu {
            for j in 0..nv {
                // u − v ↔ m = i + j, u + v ↔ m = i − j
                let lo = i + j + off;
                let hi = i + off - j;
                let q = qh[lo];
                let mut rhs = 0.0;
                let mut diag = 0.0;
                let mut known = vec![0.0; ne];
                for e in 0..ne {
                    let p = ys[e][lo] * ys[e][hi];
                    let phi_known = if j == 0 { 0.0 } else { phi[e][j - 1] + hh * g_prev[e] };
                    known[e] = phi_known;
                    let psi_known = psi_prev[e][j] + hh * phi_prev[e][j] + hh * phi_known;
                    rhs += 0.5 * w[e] * p * (first[e][i] + 2.0 * psi_known);
                    if j > 0 {
                        diag += w[e] * p * p * q * hh * hh;
                    }
                }
                let val = rhs / (1.0 - diag);
                if !val.is_finite() {
                    return Err(Error::NonFinite { x: xs[lo] });
                }
                values[i * nv + j] = val;
                for e in 0..ne {
                    let p = ys[e][lo] * ys[e][hi];
                    let g = q * p * val;
                    phi[e][j] = if j == 0 { 0.0 } else { known[e] + hh * g };
                    psi[e][j] = psi_prev[e][j] + hh * (phi_prev[e][j] + phi[e][j]);
                    g_prev[e] = g;
                }
            }
            std::mem::swap(&mut phi, &mut phi_prev);
            std::mem::swap(&mut psi, &mut psi_prev);
        }
        Ok(Lattice { u_top: self.top, h, nu, nv, values })
    }
}

/// Solves for `K±(x,y)` with `x ≥ x_min` (plus) or `x ≤ x_max` (minus),
/// covering every `y` in the kernel's support.
pub fn solve_transformation_kernel(pot: &Potential, side: Side, x_range: (f64, f64), config: &TransformConfig) -> Result<TriangularKernel> {
    let problem = Problem::new(pot, side)?;
    let (a, b) = pot.window;
    let x_low = match side {
        Side::Plus => x_range.0.max(a - 1.0),
        Side::Minus => (-x_range.1).max(-b - 1.0),
    };
    let h = config.step;
    // Snap the lattice so that u_top − u_min is a whole number of coarse steps.
    let span = ((problem.top - x_low) / h).ceil() * h;
    let u_min = problem.top - span;
    let v_max = span;
    let coarse = problem.march(h, u_min, v_max)?;
    let fine = problem.march(h / 2.0, u_min, v_max)?;
    let mut values = coarse.values.clone();
    let mut error: f64 = 0.0;
    for i in 0..coarse.nu {
        for j in 0..coarse.nv {
            let c = coarse.values[i * coarse.nv + j];
            let f = fine.values[2 * i * fine.nv + 2 * j];
            let r = (4.0 * f - c) / 3.0;
            // only cells with x = u − v inside the requested range
            if i + j < coarse.nu {
                error = error.max((r - f).abs());
            }
            values[i * coarse.nv + j] = r;
        }
    }
    Ok(TriangularKernel { side, u_top: coarse.u_top, h: coarse.h, nu: coarse.nu, nv: coarse.nv, values, error })
}

impl TriangularKernel {
    fn at(&self, i: usize, j: usize) -> f64 {
        if i >= self.nu || j >= self.nv {
            0.0
        } else {
            self.values[i * self.nv + j]
        }
    }

    /// `K±(x,y)`, by 4×4 Lagrange interpolation on the lattice.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (x, y) = match self.side {
            Side::Plus => (x, y),
            Side::Minus => (-x, -y),
        };
        if y < x - 1e-12 {
            return 0.0;
        }
        let u = 0.5 * (x + y);
        let v = (0.5 * (y - x)).max(0.0);
        if u >= self.u_top {
            return 0.0;
        }
        let fi = (self.u_top - u) / self.h;
        let fj = v / self.h;
        if fi > (self.nu - 1) as f64 + 1e-9 || fj > (self.nv - 1) as f64 + 1e-9 {
            return f64::NAN;
        }
        let base = |f: f64, n: usize| ((f.floor() as isize - 1).clamp(0, n as isize - 4)) as usize;
        let (i0, j0) = (base(fi, self.nu), base(fj, self.nv));
        let lag = |f: f64, b: usize, k: usize| {
            let mut l = 1.0;
            for m in 0..4 {
                if m != k {
                    l *= (f - (b + m) as f64) / (k as f64 - m as f64);
                }
            }
            l
        };
        let mut s = 0.0;
        for a in 0..4 {
            let la = lag(fi, i0, a);
            for c in 0..4 {
                s += la * lag(fj, j0, c) * self.at(i0 + a, j0 + c);
            }
        }
        s
    }

    pub fn diagonal(&self, x: f64) -> f64 {
        self.eval(x, x)
    }

    /// Upper end of the support of `K±(x,·)` (lower end on the minus side).
    pub fn support_end(&self, x: f64) -> f64 {
        match self.side {
            Side::Plus => 2.0 * self.u_top - x,
            Side::Minus => -2.0 * self.u_top - x,
        }
    }
}
