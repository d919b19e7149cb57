//! Eigenvalues below and between the bands, and their norming constants.

use crate::background::{Background, Branch, Partition, Regularization, Side, SpecPoint, WeylSolution};
use crate::error::Result;
use crate::numerics::quadrature::composite_gauss;
use crate::numerics::roots::bisect;
use crate::numerics::{wronskian as wr, State};
use crate::potential::Potential;

use super::jost::{jost_from_weyl, jost_states};

const BOUND_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundState {
    pub lambda: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// `dW̃/dz` at the eigenvalue.
    pub dw: f64,
}

impl BoundState {
    /// Relative residual of `(dW̃/dz)² = (γ₊γ₋)⁻²`.
    pub fn identity_residual(&self) -> f64 {
        let rhs = (self.gamma_plus * self.gamma_minus).powi(-2);
        (self.dw * self.dw - rhs).abs() / rhs
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundSearch {
    pub states: Vec<BoundState>,
    /// Sign changes too close to a band edge to isolate.
    pub unresolved: Vec<f64>,
}

/// `W̃(λ)` for real `λ` off the spectrum (real up to rounding).
pub fn w_tilde(pot: &Potential, l: f64) -> Result<f64> {
    let p = SpecPoint::Upper(l);
    let m = jost_states(pot, Side::Minus, p, Branch::Weyl, Regularization::Delta, &[0.0], BOUND_TOL)?[0];
    let pl = jost_states(pot, Side::Plus, p, Branch::Weyl, Regularization::Delta, &[0.0], BOUND_TOL)?[0];
    Ok(wr(m, pl).re)
}

/// Intervals of `ℝ ∖ σ` that can hold eigenvalues.
pub fn search_intervals(pot: &Potential, part: &Partition) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let bottom = part.sigma[0].lo;
    let lo = pot.min_q() - 1.0;
    if lo < bottom {
        out.push((lo, bottom));
    }
    for w in part.sigma.windows(2) {
        out.push((w[0].hi, w[1].lo));
    }
    out
}

/// Locates all sign changes of `W̃` on the search intervals, with `samples`
/// edge-clustered points per interval, and computes norming constants.
pub fn find_bound_states(pot: &Potential, part: &Partition, samples: usize) -> Result<BoundSearch> {
    let mut result = BoundSearch::default();
    for (a, b) in search_intervals(pot, part) {
        let len = b - a;
        let guard = 1e-7 * (1.0 + a.abs().max(b.abs()));
        let n = samples.max(8);
        let mut pts: Vec<f64> = (0..=n).map(|i| a + 0.5 * len * (1.0 - (std::f64::consts::PI * i as f64 / n as f64).cos())).collect();
        pts[0] = a + guard.min(0.25 * len);
        pts[n] = b - guard.min(0.25 * len);
        let is_edge_lo = part.sigma.iter().any(|i| i.hi == a);
        let vals: Vec<f64> = pts.iter().map(|&l| w_tilde(pot, l)).collect::<Result<_>>()?;
        for i in 0..n {
            if (vals[i] < 0.0) == (vals[i + 1] < 0.0) || vals[i + 1] == 0.0 {
                continue;
            }
            let root = bisect(&mut |l| w_tilde(pot, l).unwrap_or(f64::NAN), pts[i], pts[i + 1], 1e-14 * (1.0 + pts[i].abs()));
            let near_edge = (is_edge_lo && root - a < 1e-6) || b - root < 1e-6;
            if near_edge {
                result.unresolved.push(root);
                continue;
            }
            result.states.push(norming(pot, root)?);
        }
    }
    result.states.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(result)
}

/// `∫ ψ²` over the half-line beyond `x0` on the background's own side.
pub fn weyl_tail(bg: &Background, psi: &WeylSolution, x0: f64) -> Result<f64> {
    let dir = bg.side.sign();
    match bg.period() {
        None => {
            let m = psi.m().re;
            let v = psi.eval(x0)?.value.re;
            Ok(-dir * v * v / (2.0 * m))
        }
        Some(l) => {
            let (a, b) = if dir > 0.0 { (x0, x0 + l) } else { (x0 - l, x0) };
            let (xs, ws) = composite_gauss(a, b, (l * 4.0).ceil() as usize, 16);
            let mut one = 0.0;
            for (x, w) in xs.iter().zip(&ws) {
                one += w * psi.eval(*x)?.value.re.powi(2);
            }
            let rho = psi.multiplier().map(|r| r.re).unwrap_or(0.0);
            let f = if dir > 0.0 { rho * rho } else { 1.0 / (rho * rho) };
            Ok(one / (1.0 - f))
        }
    }
}

fn window_nodes(pot: &Potential, l: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cuts = pot.breakpoints();
    cuts.sort_by(f64::total_cmp);
    let k = (l - pot.min_q()).abs().sqrt();
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        let panels = ((len * (1.0 + k)).ceil() as usize).max(1);
        let (x, wt) = composite_gauss(w[0], w[1], panels, 16);
        xs.extend(x);
        ws.extend(wt);
    }
    (xs, ws)
}

/// Norming constants at an eigenvalue via full-line integrals of the
/// regularized Jost solutions, and `dW̃/dz` by central differences.
pub fn norming(pot: &Potential, l: f64) -> Result<BoundState> {
    let p = SpecPoint::Upper(l);
    let wp = pot.plus.weyl(p, Branch::Weyl, Regularization::Delta)?;
    let wm = pot.minus.weyl(p, Branch::Weyl, Regularization::Delta)?;
    let (xs, ws) = window_nodes(pot, l);
    let mut with_ends = xs.clone();
    with_ends.push(pot.window.0);
    with_ends.push(pot.window.1);
    let fp = jost_from_weyl(pot, Side::Plus, &wp, &with_ends, BOUND_TOL)?;
    let fm = jost_from_weyl(pot, Side::Minus, &wm, &with_ends, BOUND_TOL)?;
    let n = xs.len();
    let inner = |f: &[State]| xs.iter().enumerate().map(|(i, _)| ws[i] * f[i].value.re.powi(2)).sum::<f64>();
    let ratio = |a: State, b: State| -> f64 {
        // least-squares c with a ≈ c b on (value, derivative)
        ((a.value * b.value.conj() + a.deriv * b.deriv.conj()) / (b.value.norm_sqr() + b.deriv.norm_sqr())).re
    };
    let tail_p = weyl_tail(&pot.plus, &wp, pot.window.1)?;
    let tail_m = weyl_tail(&pot.minus, &wm, pot.window.0)?;
    // φ̃₊ = c φ̃₋ on the left, φ̃₋ = φ̃₊ / c on the right.
    let c = ratio(fp[n], fm[n]);
    let c_right = ratio(fm[n + 1], fp[n + 1]);
    let norm_p = inner(&fp) + tail_p + c * c * tail_m;
    let norm_m = inner(&fm) + tail_m + c_right * c_right * tail_p;
    let h = 1e-5 * (1.0 + l.abs());
    let dw = (w_tilde(pot, l + h)? - w_tilde(pot, l - h)?) / (2.0 * h);
    Ok(BoundState { lambda: l, gamma_plus: norm_p.powf(-0.5), gamma_minus: norm_m.powf(-0.5), dw })
}
