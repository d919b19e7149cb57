//! Solving the KdV initial value problem through the evolved GLM equation.

use rayon::prelude::*;

use crate::background::Side;
use crate::direct::ScatteringData;
use crate::error::{Error, Result};
use crate::glm::{reconstruct_potential, sample_potential, GlmConfig};
use crate::numerics::quadrature::composite_gauss;
use crate::potential::Potential;
use crate::report::Check;

use super::evolve::{evolve_data, EvolvedData, KdvFlow};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KdvConfig {
    pub glm: GlmConfig,
    /// Extra room on each side of the initial window for the GLM at `t > 0`.
    pub margin: f64,
    /// Tolerance for the necessary conditions on evolved data.
    pub tol: f64,
}

impl Default for KdvConfig {
    fn default() -> Self {
        Self { glm: GlmConfig::default(), margin: 4.0, tol: 1e-6 }
    }
}

/// `u(·, t)` reconstructed from evolved data.
#[derive(Clone, Debug)]
pub struct KdvSlice {
    pub t: f64,
    pub x: Vec<f64>,
    /// Mean of the two one-sided reconstructions.
    pub u: Vec<f64>,
    /// `sup |q̃₊ − q̃₋|`.
    pub discrepancy: f64,
    pub evolved: EvolvedData,
    pub checks: Vec<Check>,
}

/// Evolves the data to time `t` and solves both GLM equations there.
pub fn reconstruct_at(base: &ScatteringData, flow: &KdvFlow, window: (f64, f64), t: f64, config: &KdvConfig) -> Result<KdvSlice> {
    let evolved = evolve_data(base, flow, t, config.tol)?;
    let wide = (window.0 - config.margin, window.1 + config.margin);
    let rec = reconstruct_potential(&evolved.data, &evolved.minus, &evolved.plus, wide, &config.glm, &[Side::Plus, Side::Minus], None)?;
    let (qp, qm) = (rec.q(Side::Plus).unwrap(), rec.q(Side::Minus).unwrap());
    let u = qp.iter().zip(qm).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut checks = evolved.checks.clone();
    checks.extend(rec.checks.iter().cloned());
    Ok(KdvSlice { t, x: rec.x.clone(), u, discrepancy: rec.discrepancy.unwrap_or(f64::NAN), evolved, checks })
}

/// `u(x, t)` at the given points only, as the mean of both one-sided
/// reconstructions; used for resolution studies.
pub fn sample_at(base: &ScatteringData, flow: &KdvFlow, window: (f64, f64), t: f64, config: &KdvConfig, xs: &[f64]) -> Result<Vec<f64>> {
    let ev = evolve_data(base, flow, t, config.tol)?;
    let wide = (window.0 - config.margin, window.1 + config.margin);
    let qp = sample_potential(&ev.data, &ev.minus, &ev.plus, wide, &config.glm, Side::Plus, xs)?;
    let qm = sample_potential(&ev.data, &ev.minus, &ev.plus, wide, &config.glm, Side::Minus, xs)?;
    Ok(qp.iter().zip(&qm).map(|(a, b)| 0.5 * (a + b)).collect())
}

/// `u(·, t)` for each requested time; a failure at one time does not stop the others.
pub fn solve_kdv_ist(pot: &Potential, base: &ScatteringData, times: &[f64], config: &KdvConfig) -> Result<Vec<Result<KdvSlice>>> {
    let flow = KdvFlow::new(&pot.minus, &pot.plus)?;
    Ok(times.par_iter().map(|&t| reconstruct_at(base, &flow, pot.window, t, config)).collect())
}

/// `∫(1 + x²)|q − p±|` over the window, reported for the moment gate.
pub fn moment_gate(pot: &Potential) -> Check {
    let (a, b) = pot.window;
    let panels = (4.0 * (b - a)).ceil() as usize;
    let mut cuts = vec![a];
    cuts.extend(pot.breakpoints().into_iter().filter(|&c| c > a && c < b));
    cuts.push(b);
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let n = ((panels as f64) * (w[1] - w[0]) / (b - a)).ceil().max(1.0) as usize;
        let (xs, ws) = composite_gauss(w[0], w[1], n, 12);
        sum += xs.iter().zip(ws).map(|(&x, w)| w * (1.0 + x * x) * (pot.q(x) - pot.background_at(x)).abs()).sum::<f64>();
    }
    Check::info("kdv_moment_2", sum)
}

/// Finite-difference residual of `u_t − 6uu_x + u_xxx` at the middle time,
/// relative to `max|u|`, with a truncation estimate from the same
/// second-order stencil at doubled spacing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualEstimate {
    pub residual: f64,
    pub truncation: f64,
    pub scale: f64,
}

fn uniform(v: &[f64]) -> Option<f64> {
    let h = v[1] - v[0];
    let ok = h > 0.0 && v.windows(2).all(|w| ((w[1] - w[0]) - h).abs() < 1e-9 * h.max(1.0));
    ok.then_some(h)
}

/// `u[k][i] = u(x[i], times[k])` with five equispaced times and equispaced `x`.
pub fn kdv_residual(x: &[f64], times: &[f64], u: &[Vec<f64>]) -> Result<ResidualEstimate> {
    if times.len() != 5 || u.len() != 5 || x.len() < 9 || u.iter().any(|r| r.len() != x.len()) {
        return Err(Error::InvalidInput("the KdV stencil needs 5 equispaced times and at least 9 equispaced points".into()));
    }
    let (dx, dt) = match (uniform(x), uniform(times)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidInput("KdV stencil grids must be equispaced".into())),
    };
    let c = &u[2];
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let at = |i: usize, s: usize| -> f64 {
        let ut = (u[2 + s][i] - u[2 - s][i]) / (2.0 * s as f64 * dt);
        let h = s as f64 * dx;
        let ux = (c[i + s] - c[i - s]) / (2.0 * h);
        let uxxx = (c[i + 2 * s] - 2.0 * c[i + s] + 2.0 * c[i - s] - c[i - 2 * s]) / (2.0 * h * h * h);
        ut - 6.0 * c[i] * ux + uxxx
    };
    let (mut res, mut trunc) = (0.0f64, 0.0f64);
    for i in 4..x.len() - 4 {
        let (fine, coarse) = (at(i, 1), at(i, 2));
        res = res.max(fine.abs());
        trunc = trunc.max((coarse - fine).abs() / 3.0);
    }
    Ok(ResidualEstimate { residual: res / scale, truncation: trunc / scale, scale })
}
