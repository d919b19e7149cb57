//! Band-edge behaviour of `Ŵ`: generic edges versus virtual levels.

use nalgebra::{DMatrix, DVector};

use crate::background::{Partition, Regularization, SpecPoint};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::potential::Potential;

use super::jost::wronskian;

/// `|Ŵ(E)|` below this fraction of the nearby band scale flags a virtual level.
pub const VIRTUAL_THRESHOLD: f64 = 1e-6;
/// Fits with `|Ŵ(E)|` between the two thresholds are reported as ambiguous.
pub const AMBIGUOUS_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeFit {
    pub edge: f64,
    /// Extrapolated `Ŵ(E)`.
    pub value: C64,
    /// Coefficient of `√(z - E)` in `Ŵ`.
    pub c: C64,
    /// Median `|Ŵ|` over the adjacent band.
    pub scale: f64,
    pub virtual_level: bool,
    pub ambiguous: bool,
}

fn fit(taus: &[C64], vals: &[C64], with_constant: bool) -> Result<Vec<C64>> {
    let cols = if with_constant { 3 } else { 2 };
    let a = DMatrix::from_fn(taus.len(), cols, |i, j| {
        let p = if with_constant { j } else { j + 1 };
        taus[i].powi(p as i32)
    });
    let b = DVector::from_column_slice(vals);
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::Singular(format!("edge fit: {e}")))?;
    Ok(x.iter().copied().collect())
}

/// Fits `Ŵ(E + τ²) ≈ A + Cτ + Dτ²` on a small arc in the upper half plane.
pub fn classify_edge(pot: &Potential, edge: f64, part: &Partition) -> Result<EdgeFit> {
    let len = 1e-3 * (1.0 + edge.abs());
    let mut taus = Vec::new();
    let mut vals = Vec::new();
    for r in [1.0, 2.0, 4.0] {
        for th in [0.125, 0.25, 0.375] {
            let tau = C64::from_polar((r * len).sqrt(), th * std::f64::consts::PI);
            let z = edge + tau * tau;
            taus.push(tau);
            vals.push(wronskian(pot, SpecPoint::Complex(z), Regularization::DeltaHat)?);
        }
    }
    let abc = fit(&taus, &vals, true)?;
    // Median |Ŵ| over the band adjacent to the edge inside σ.
    let band = part.sigma.iter().find(|i| edge >= i.lo - 1e-12 && edge <= i.hi + 1e-12);
    let mut mags = Vec::new();
    if let Some(b) = band {
        let hi = if b.hi.is_finite() { b.hi } else { b.lo + 4.0 };
        for j in 1..6 {
            let l = b.lo + (hi - b.lo) * j as f64 / 6.0;
            mags.push(wronskian(pot, SpecPoint::Upper(l), Regularization::DeltaHat)?.norm());
        }
    }
    mags.sort_by(f64::total_cmp);
    let scale = mags.get(mags.len() / 2).copied().unwrap_or(1.0).max(1e-300);
    let value = abc[0];
    let rel = value.norm() / scale;
    let virtual_level = rel < VIRTUAL_THRESHOLD;
    let c = if virtual_level { fit(&taus, &vals, false)?[0] } else { abc[1] };
    Ok(EdgeFit { edge, value, c, scale, virtual_level, ambiguous: !virtual_level && rel < AMBIGUOUS_THRESHOLD })
}

/// Classifies every edge of both background spectra.
pub fn classify_edges(pot: &Potential, part: &Partition) -> Result<Vec<EdgeFit>> {
    let mut edges: Vec<f64> = pot.minus.edges().into_iter().chain(pot.plus.edges()).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
    edges.into_iter().map(|e| classify_edge(pot, e, part)).collect()
}
