//! Time evolution of scattering data.

use crate::background::{Background, Branch, Regularization, Side, SpecPoint};
use crate::direct::{necessary_conditions, ScatteringData};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::report::Check;

use super::flow::BackgroundFlow;

/// Both backgrounds under the KdV flow.
#[derive(Clone, Debug)]
pub struct KdvFlow {
    pub minus: BackgroundFlow,
    pub plus: BackgroundFlow,
}

impl KdvFlow {
    pub fn new(minus: &Background, plus: &Background) -> Result<Self> {
        Ok(Self { minus: BackgroundFlow::new(minus)?, plus: BackgroundFlow::new(plus)? })
    }

    pub fn side(&self, side: Side) -> &BackgroundFlow {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }
}

/// Scattering data and backgrounds at time `t`, with the necessary
/// conditions re-checked on the evolved data.
#[derive(Clone, Debug)]
pub struct EvolvedData {
    pub t: f64,
    pub data: ScatteringData,
    pub minus: Background,
    pub plus: Background,
    pub checks: Vec<Check>,
}

impl EvolvedData {
    pub fn background(&self, side: Side) -> &Background {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }
}

/// `R±(t) = R±e^{α±−ᾱ±}`, `T±(t) = T±e^{α∓−ᾱ±}` on the upper rim and
/// `γ±²(t) = γ±²e^{2α±}`, corrected for the change of regularization when
/// the Dirichlet data of the backgrounds move.
pub fn evolve_data(base: &ScatteringData, flow: &KdvFlow, t: f64, tol: f64) -> Result<EvolvedData> {
    let minus = flow.minus.at(t)?;
    let plus = flow.plus.at(t)?;
    let mut data = base.clone();
    for side in [Side::Plus, Side::Minus] {
        let (own, other) = (flow.side(side), flow.side(side.opposite()));
        let pieces = match side {
            Side::Plus => &mut data.bands_plus,
            Side::Minus => &mut data.bands_minus,
        };
        for piece in pieces.iter_mut() {
            for i in 0..piece.lambda.len() {
                let p = SpecPoint::Upper(piece.lambda[i]);
                let a = own.phase_factor(p, t)?;
                let b = other.phase_factor(p, t)?;
                piece.r[i] *= a / a.conj();
                piece.t[i] *= b / a.conj();
            }
        }
    }
    let start = [(Side::Minus, &flow.minus.initial), (Side::Plus, &flow.plus.initial)];
    for b in &mut data.bound {
        let p = SpecPoint::Upper(b.lambda);
        let mut g = [0.0; 2];
        for (k, (side, bg0)) in start.iter().enumerate() {
            let bgt = if *side == Side::Plus { &plus } else { &minus };
            let e = flow.side(*side).phase_factor(p, t)?;
            let a0 = bg0.weyl(p, Branch::Weyl, Regularization::Delta)?.a;
            let at = bgt.weyl(p, Branch::Weyl, Regularization::Delta)?.a;
            let gamma0 = if *side == Side::Plus { b.gamma_plus } else { b.gamma_minus };
            let w: C64 = e * a0 / at;
            if !(w.norm() > 0.0 && w.norm().is_finite()) {
                return Err(Error::Unresolved(format!("norming constant at λ = {} does not evolve to time {t}", b.lambda)));
            }
            g[k] = gamma0 * w.norm();
        }
        b.gamma_minus = g[0];
        b.gamma_plus = g[1];
        b.dw = b.dw.signum() / (g[0] * g[1]);
    }
    let checks = necessary_conditions(&data, &minus, &plus, tol)?;
    Ok(EvolvedData { t, data, minus, plus, checks })
}
