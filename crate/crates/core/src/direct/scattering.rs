//! Transmission and reflection coefficients on the rims of the spectrum.

use crate::background::{Branch, Regularization, Side, SpecPoint};
use crate::error::{Error, Result};
use crate::numerics::{wronskian as wr, C64};
use crate::potential::Potential;

use super::jost::{jost_states, JOST_TOL};

/// Scattering coefficients of one side at one rim point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RimSample {
    pub point: SpecPoint,
    pub t: C64,
    pub r: C64,
    /// `W(φ₋, φ₊)` times the opposite side's `δ` (finite at its poles).
    pub w_reg: C64,
    /// `δ` of the opposite side at the point.
    pub delta_other: C64,
    pub g: C64,
}

impl RimSample {
    /// Plain Wronskian `W(φ₋, φ₊)`.
    pub fn w(&self) -> C64 {
        self.w_reg / self.delta_other
    }
}

/// `T±`, `R±` at a rim point of `σ±`, evaluated at `x0`.
pub fn scattering_at(pot: &Potential, side: Side, p: SpecPoint, x0: f64) -> Result<RimSample> {
    let l = p.z().re;
    if matches!(p, SpecPoint::Complex(_)) || !pot.background(side).in_spectrum(l) {
        return Err(Error::InvalidInput(format!("{l} is not a rim point of the {} spectrum", side.label())));
    }
    if pot.background(side).edges().iter().any(|&e| (e - l).abs() < 1e-14 * (1.0 + l.abs())) {
        return Err(Error::InvalidInput(format!("{l} is a band edge; use the edge classification")));
    }
    let other = side.opposite();
    let own = jost_states(pot, side, p, Branch::Weyl, Regularization::None, &[x0], JOST_TOL)?[0];
    let opp = jost_states(pot, other, p, Branch::Weyl, Regularization::Delta, &[x0], JOST_TOL)?[0];
    let delta_other = pot.background(other).delta(p, Regularization::Delta);
    let g = pot.background(side).g(p)?;
    let own_bar = own.conj();
    let (w_reg, r) = match side {
        Side::Plus => {
            let w = wr(opp, own);
            (w, -wr(opp, own_bar) / w)
        }
        Side::Minus => {
            let w = wr(own, opp);
            (w, wr(opp, own_bar) / w)
        }
    };
    if w_reg.norm() == 0.0 {
        return Err(Error::Singular(format!("Wronskian vanishes at {l}")));
    }
    let t = -delta_other / (g * w_reg);
    Ok(RimSample { point: p, t, r, w_reg, delta_other, g })
}
