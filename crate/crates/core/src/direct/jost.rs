//! Jost solutions by back-propagation from the window edge, where they
//! coincide with the background Weyl solutions.

use crate::background::{Branch, Regularization, Side, SpecPoint, WeylSolution};
use crate::error::Result;
use crate::numerics::{propagate_ode, wronskian as wr, State, C64};
use crate::potential::Potential;

/// Tolerance for Jost propagation in the direct problem.
pub const JOST_TOL: f64 = 1e-11;

/// `φ±(p, x)` (or, with `Branch::Breve`, the solution built on `ψ̆±`) at each
/// `x`, multiplied by the regularizing product `reg`.
pub fn jost_states(pot: &Potential, side: Side, p: SpecPoint, branch: Branch, reg: Regularization, xs: &[f64], tol: f64) -> Result<Vec<State>> {
    let bg = pot.background(side);
    let weyl = bg.weyl(p, branch, reg)?;
    jost_from_weyl(pot, side, &weyl, xs, tol)
}

/// Propagates a given background solution inwards from the window edge.
pub fn jost_from_weyl(pot: &Potential, side: Side, weyl: &WeylSolution, xs: &[f64], tol: f64) -> Result<Vec<State>> {
    let z = weyl.point.z();
    let edge = match side {
        Side::Plus => pot.window.1,
        Side::Minus => pot.window.0,
    };
    let dir = side.sign();
    let q = |x: f64| pot.q(x);
    let mut order: Vec<usize> = (0..xs.len()).collect();
    // Visit points from the window edge inwards.
    order.sort_by(|&a, &b| (dir * xs[b]).total_cmp(&(dir * xs[a])));
    let mut stops: Vec<f64> = pot.breakpoints().into_iter().filter(|&b| dir * b < dir * edge).collect();
    stops.sort_by(|a, b| (dir * b).total_cmp(&(dir * a)));
    let mut out = vec![State::default(); xs.len()];
    let mut x = edge;
    let mut y = weyl.eval(edge)?;
    let mut k = 0;
    for i in order {
        let target = xs[i];
        if dir * target >= dir * edge {
            out[i] = weyl.eval(target)?;
            continue;
        }
        while k < stops.len() && dir * stops[k] > dir * target {
            if dir * stops[k] < dir * x {
                y = propagate_ode(&q, z, x, y, stops[k], tol)?;
                x = stops[k];
            }
            k += 1;
        }
        y = propagate_ode(&q, z, x, y, target, tol)?;
        x = target;
        out[i] = y;
    }
    Ok(out)
}

/// Single-point convenience wrapper with the default tolerance.
pub fn jost(pot: &Potential, side: Side, p: SpecPoint, reg: Regularization, x: f64) -> Result<State> {
    Ok(jost_states(pot, side, p, Branch::Weyl, reg, &[x], JOST_TOL)?[0])
}

/// `W(φ₋, φ₊)` evaluated at `x0` with both Jost solutions regularized by `reg`.
pub fn wronskian_at(pot: &Potential, p: SpecPoint, reg: Regularization, x0: f64, tol: f64) -> Result<C64> {
    let m = jost_states(pot, Side::Minus, p, Branch::Weyl, reg, &[x0], tol)?[0];
    let pl = jost_states(pot, Side::Plus, p, Branch::Weyl, reg, &[x0], tol)?[0];
    Ok(wr(m, pl))
}

/// `W`, `W̃` or `Ŵ` at `p`, evaluated at the origin.
pub fn wronskian(pot: &Potential, p: SpecPoint, reg: Regularization) -> Result<C64> {
    wronskian_at(pot, p, reg, 0.0, JOST_TOL)
}

/// Maximum relative spread of `W(φ₋, φ₊)` over the sample points.
pub fn wronskian_spread(pot: &Potential, p: SpecPoint, reg: Regularization, xs: &[f64]) -> Result<f64> {
    let m = jost_states(pot, Side::Minus, p, Branch::Weyl, reg, xs, 1e-13)?;
    let pl = jost_states(pot, Side::Plus, p, Branch::Weyl, reg, xs, 1e-13)?;
    let ws: Vec<C64> = m.iter().zip(&pl).map(|(a, b)| wr(*a, *b)).collect();
    let scale = ws.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1e-300);
    Ok(ws.iter().map(|w| (w - ws[0]).norm()).fold(0.0, f64::max) / scale)
}
