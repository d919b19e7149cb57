//! Two-sided reconstruction with the consistency, identity and solvability
//! checks collected in one report.

use super::checks::symmetry;
use super::kernel::GlmKernel;
use super::solve::{reconstruct, reconstruct_points, GlmSolver, NystromConfig, Reconstruction};
use crate::background::{Background, Side};
use crate::direct::ScatteringData;
use crate::error::Result;
use crate::potential::Potential;
use crate::report::Check;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlmConfig {
    pub nystrom: NystromConfig,
    /// Spacing of the reconstruction grid.
    pub step: f64,
    /// Fraction of the window (centred) on which `q̃` is reported.
    pub central: f64,
}

impl Default for GlmConfig {
    fn default() -> Self {
        Self { nystrom: NystromConfig::default(), step: 0.1, central: 0.6 }
    }
}

impl GlmConfig {
    pub fn refined(&self) -> Self {
        Self { nystrom: self.nystrom.refined(), step: self.step / 2.0, ..*self }
    }

    pub fn coarsened(&self) -> Self {
        Self { nystrom: self.nystrom.coarsened(), step: self.step * 2.0, ..*self }
    }
}

/// Centred sub-interval covering `fraction` of `window`.
pub fn central_window(window: (f64, f64), fraction: f64) -> (f64, f64) {
    let mid = 0.5 * (window.0 + window.1);
    let half = 0.5 * fraction * (window.1 - window.0);
    (mid - half, mid + half)
}

#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub x: Vec<f64>,
    pub q_plus: Option<Vec<f64>>,
    pub q_minus: Option<Vec<f64>>,
    pub diagonal_plus: Option<Vec<f64>>,
    pub diagonal_minus: Option<Vec<f64>>,
    /// `sup |q̃₊ − q̃₋|` when both sides were reconstructed.
    pub discrepancy: Option<f64>,
    pub checks: Vec<Check>,
}

impl ReconstructionReport {
    pub fn q(&self, side: Side) -> Option<&Vec<f64>> {
        match side {
            Side::Plus => self.q_plus.as_ref(),
            Side::Minus => self.q_minus.as_ref(),
        }
    }
}

/// `q̃±` at the given points only; used for resolution studies where a
/// full grid would be too costly.
pub fn sample_potential(data: &ScatteringData, minus: &Background, plus: &Background, window: (f64, f64), config: &GlmConfig, side: Side, xs: &[f64]) -> Result<Vec<f64>> {
    let kernel = GlmKernel::new(data, minus, plus, side, window)?;
    let solver = GlmSolver::new(&kernel, window, config.nystrom);
    reconstruct_points(&solver, xs, config.step)
}

/// Smallest eigenvalue of the discrete `I + F` over rows at the ends and
/// centre of `[a, b]`.
fn positivity(solver: &GlmSolver, a: f64, b: f64) -> Result<f64> {
    let mut m = f64::INFINITY;
    for x in [a, 0.5 * (a + b), b] {
        m = m.min(solver.min_eigenvalue(x)?);
    }
    Ok(m)
}

fn one_side(
    data: &ScatteringData,
    minus: &Background,
    plus: &Background,
    window: (f64, f64),
    config: &GlmConfig,
    side: Side,
    reference: Option<&Potential>,
) -> Result<(Reconstruction, Vec<Check>)> {
    let label = side.label();
    let kernel = GlmKernel::new(data, minus, plus, side, window)?;
    let solver = GlmSolver::new(&kernel, window, config.nystrom);
    let (a, b) = central_window(window, config.central);
    let rec = reconstruct(&solver, a, b, config.step)?;
    let mut checks = vec![symmetry(&kernel, window)?];
    checks.push(Check::above(format!("glm_positivity_{label}"), positivity(&solver, a, b)?, 1e-6));
    checks.push(Check::below(format!("glm_residual_{label}"), rec.residual, 1e-8));
    if kernel.pole_in_simple_spectrum {
        checks.push(Check::info(format!("glm_regularized_{label}"), 1.0).with_note("Dirichlet pole inside the simple spectrum"));
    }
    let bg = kernel.background.clone();
    let moment: f64 = rec.x.iter().zip(&rec.q).map(|(&x, &q)| (q - bg.q(x)).abs() * (1.0 + x * x) * config.step).sum();
    checks.push(Check::info(format!("reconstruction_moment_{label}"), moment));
    if let Some(pot) = reference {
        let mut diag: f64 = 0.0;
        let mut err: f64 = 0.0;
        for i in 0..rec.x.len() {
            let x = rec.x[i];
            diag = diag.max((rec.diagonal[i] - 0.5 * pot.tail_integral(side, x, false)).abs());
            err = err.max((rec.q[i] - pot.q(x)).abs());
        }
        checks.push(Check::below(format!("diagonal_identity_{label}"), diag, 1e-5));
        checks.push(Check::below(format!("roundtrip_{label}"), err, 1e-3));
    }
    Ok((rec, checks))
}

/// Reconstructs from each requested side and compares the two.
pub fn reconstruct_potential(
    data: &ScatteringData,
    minus: &Background,
    plus: &Background,
    window: (f64, f64),
    config: &GlmConfig,
    sides: &[Side],
    reference: Option<&Potential>,
) -> Result<ReconstructionReport> {
    let mut report = ReconstructionReport { x: Vec::new(), q_plus: None, q_minus: None, diagonal_plus: None, diagonal_minus: None, discrepancy: None, checks: Vec::new() };
    for &side in sides {
        let (rec, checks) = one_side(data, minus, plus, window, config, side, reference)?;
        report.checks.extend(checks);
        report.x = rec.x;
        match side {
            Side::Plus => {
                report.q_plus = Some(rec.q);
                report.diagonal_plus = Some(rec.diagonal);
            }
            Side::Minus => {
                report.q_minus = Some(rec.q);
                report.diagonal_minus = Some(rec.diagonal);
            }
        }
    }
    if let (Some(p), Some(m)) = (&report.q_plus, &report.q_minus) {
        let d = p.iter().zip(m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        report.discrepancy = Some(d);
        report.checks.push(Check::below("two_sided_consistency", d, 1e-3));
    }
    Ok(report)
}

/// Reconstruction from the partial data `𝒮±` alone, compared with the
/// reconstruction from the full data on the same side.
pub fn partial_data_roundtrip(
    data: &ScatteringData,
    minus: &Background,
    plus: &Background,
    window: (f64, f64),
    config: &GlmConfig,
    side: Side,
    reference: Option<&Potential>,
) -> Result<ReconstructionReport> {
    let partial = data.restricted(side);
    let mut report = reconstruct_potential(&partial, minus, plus, window, config, &[side], reference)?;
    let full = one_side(data, minus, plus, window, config, side, None)?.0;
    let q = report.q(side).expect("side was reconstructed");
    let d = q.iter().zip(&full.q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    report.checks.push(Check::below(format!("partial_data_agreement_{}", side.label()), d, 1e-12));
    Ok(report)
}
