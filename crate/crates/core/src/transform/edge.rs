//! Band-edge residue kernel
//! `D±(x,y,t,s) = ∓¼ Σ_E f±(E,x,y) f±(E,t,s) / P±'(E)`,
//! `f±(E,x,y) = lim_{z→E} Π(z−μⱼ) ψ±(z,x) ψ̆±(z,y)`.

use crate::background::{Background, Branch, Regularization, Side, SpecPoint, WeylSolution};
use crate::error::{Error, Result};

/// Relative steps of the `z → E` extrapolation.
const TAU: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// One edge: `f(E,x,y) = amplitude · Y(x) Y(y)` with `Y` the edge solution.
#[derive(Clone, Debug)]
pub struct EdgeTerm {
    pub edge: f64,
    pub solution: WeylSolution,
    pub amplitude: f64,
    /// `P'(E) = Π_{E' ≠ E} (E − E')`.
    pub dp: f64,
    /// Error estimate of the extrapolated limit.
    pub limit_error: f64,
}

impl EdgeTerm {
    /// `amplitude² / P'(E)`.
    pub fn weight(&self) -> f64 {
        self.amplitude * self.amplitude / self.dp
    }

    pub fn y(&self, x: f64) -> Result<f64> {
        Ok(self.solution.eval(x)?.value.re)
    }
}

#[derive(Clone, Debug)]
pub struct EdgeResidueKernel {
    pub side: Side,
    pub terms: Vec<EdgeTerm>,
}

/// `Π(z−μⱼ) ψ(z,x) ψ̆(z,x)` on the band rim next to `edge`.
fn regularized_product(bg: &Background, z: f64, x: f64) -> Result<f64> {
    let p = SpecPoint::Upper(z);
    let psi = bg.weyl(p, Branch::Weyl, Regularization::DeltaHat)?.eval(x)?.value;
    let breve = bg.weyl(p, Branch::Breve, Regularization::DeltaBreve)?.eval(x)?.value;
    Ok((psi * breve).re)
}

impl EdgeResidueKernel {
    pub fn new(bg: &Background) -> Result<Self> {
        let edges = bg.edges();
        let mut terms = Vec::with_capacity(edges.len());
        for (k, &e) in edges.iter().enumerate() {
            let solution = bg.edge_solution(e)?;
            let dp: f64 = edges.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &ej)| e - ej).product();
            // x₀ where the edge solution is largest over one period
            let (x0, y0) = match bg.period() {
                None => (0.0, 1.0),
                Some(l) => (0..64)
                    .map(|i| {
                        let x = l * i as f64 / 64.0;
                        solution.eval(x).map(|s| (x, s.value.re))
                    })
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold((0.0f64, 0.0f64), |best, c| if c.1.abs() > best.1.abs() { c } else { best }),
            };
            let into_band = if bg.bands.iter().any(|b| b.lo == e) { 1.0 } else { -1.0 };
            let scale = 1.0 + e.abs();
            let f: Vec<f64> = TAU.iter().map(|t| regularized_product(bg, e + into_band * t * scale, x0)).collect::<Result<_>>()?;
            // The product is a polynomial in z at x = y: Richardson in τ.
            let r1 = 2.0 * f[1] - f[0];
            let r2 = 2.0 * f[2] - f[1];
            let limit = (4.0 * r2 - r1) / 3.0;
            let limit_error = (limit - r2).abs();
            if !limit.is_finite() || limit_error > 1e-6 * (1.0 + limit.abs()) {
                return Err(Error::Unresolved(format!("edge limit at {e} did not settle (change {limit_error:e})")));
            }
            terms.push(EdgeTerm { edge: e, solution, amplitude: limit / (y0 * y0), dp, limit_error });
        }
        Ok(Self { side: bg.side, terms })
    }

    pub fn f(&self, k: usize, x: f64, y: f64) -> Result<f64> {
        let t = &self.terms[k];
        Ok(t.amplitude * t.y(x)? * t.y(y)?)
    }

    /// `D±(x,y,t,s)`.
    pub fn d(&self, x: f64, y: f64, t: f64, s: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (k, term) in self.terms.iter().enumerate() {
            sum += self.f(k, x, y)? * self.f(k, t, s)? / term.dp;
        }
        Ok(-self.side.sign() * 0.25 * sum)
    }
}
