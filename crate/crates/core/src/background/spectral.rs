//! Spectral transform with respect to a background's Weyl solutions and its
//! inverse; the round trip measures completeness of the Weyl system.

use rayon::prelude::*;

use super::{Background, Branch, Regularization, SpecPoint};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{composite_gauss, panel_layout};
use crate::numerics::{band_quadrature, Singularity, C64};

/// Quadrature nodes on the upper rim of a background spectrum with weights
/// `Im g(λ) dλ / π`, truncated at `cutoff`.
#[derive(Clone, Debug)]
pub struct RimGrid {
    pub lambda: Vec<f64>,
    pub weight: Vec<f64>,
}

impl RimGrid {
    pub fn new(bg: &Background, nodes_per_band: usize, cutoff: f64) -> Result<Self> {
        let mut lambda = Vec::new();
        let mut raw = Vec::new();
        for band in &bg.bands {
            if band.lo >= cutoff {
                break;
            }
            let n = if band.is_finite() { nodes_per_band } else { nodes_per_band * ((cutoff - band.lo).sqrt().ceil() as usize).max(1) };
            let rule = band_quadrature(*band, Singularity::SqrtMapped, n, Some(cutoff))?;
            lambda.extend_from_slice(&rule.nodes);
            raw.extend_from_slice(&rule.weights);
        }
        let img: Vec<f64> = lambda.par_iter().map(|&l| bg.g(SpecPoint::Upper(l)).map(|g| g.im)).collect::<Result<_>>()?;
        let weight = raw.iter().zip(&img).map(|(w, g)| w * g / std::f64::consts::PI).collect();
        Ok(Self { lambda, weight })
    }
}

/// `f̂(λ) = ∫ f(y) conj ψ(λᵘ, y) dy` for `f` supported in `support`.
pub fn forward<F>(bg: &Background, f: &F, support: (f64, f64), grid: &RimGrid) -> Result<Vec<C64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let (a, b) = support;
    if !(a < b) {
        return Err(Error::InvalidInput(format!("empty support [{a}, {b}]")));
    }
    let kmax = grid.lambda.iter().fold(0.0f64, |m, &l| m.max((l - bg.bottom()).abs().sqrt()));
    let (panels, m) = panel_layout((b - a) * (1.0 + kmax) / 2.0, 16 * ((b - a).ceil() as usize).max(1));
    let (ys, ws) = composite_gauss(a, b, panels, m.max(16));
    let fy: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
    grid.lambda
        .par_iter()
        .map(|&l| {
            let psi = bg.weyl(SpecPoint::Upper(l), Branch::Weyl, Regularization::None)?;
            let mut acc = C64::default();
            for ((y, w), fv) in ys.iter().zip(&ws).zip(&fy) {
                if *fv != 0.0 {
                    acc += psi.eval(*y)?.value.conj() * (w * fv);
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `f(x) = (1/π) ∫ Re(f̂(λ) ψ(λᵘ, x)) Im g(λᵘ) dλ` at each `x`.
pub fn inverse(bg: &Background, fhat: &[C64], grid: &RimGrid, xs: &[f64]) -> Result<Vec<f64>> {
    let cols: Vec<Vec<f64>> = grid
        .lambda
        .par_iter()
        .zip(fhat)
        .zip(&grid.weight)
        .map(|((&l, fh), w)| {
            let psi = bg.weyl(SpecPoint::Upper(l), Branch::Weyl, Regularization::None)?;
            xs.iter().map(|&x| Ok((fh * psi.eval(x)?.value).re * w)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok((0..xs.len()).map(|i| cols.iter().map(|c| c[i]).sum()).collect())
}

/// Sup-norm residual of the forward/inverse round trip at `xs`.
pub fn roundtrip_residual<F>(bg: &Background, f: &F, support: (f64, f64), xs: &[f64], nodes_per_band: usize, cutoff: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let grid = RimGrid::new(bg, nodes_per_band, cutoff)?;
    let fhat = forward(bg, f, support, &grid)?;
    let rec = inverse(bg, &fhat, &grid, xs)?;
    Ok(xs.iter().zip(&rec).map(|(&x, r)| (f(x) - r).abs()).fold(0.0, f64::max))
}
