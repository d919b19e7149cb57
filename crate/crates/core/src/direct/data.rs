//! Scattering data on quadrature grids and the necessary conditions it
//! must satisfy.

use crate::background::{Background, Partition, Side, SpecPoint};
use crate::error::{Error, Result};
use crate::numerics::{band_quadrature, Band, Singularity, C64};
use crate::potential::Potential;
use crate::report::Check;

use super::bound::{find_bound_states, BoundState};
use super::edges::{classify_edges, EdgeFit};
use super::jost::wronskian_spread;
use super::scattering::scattering_at;

/// Node counts and truncation of the spectral grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    /// Nodes on each finite band piece.
    pub nodes_per_band: usize,
    /// Nodes per unit of `√(λ - E)` on the unbounded band.
    pub nodes_per_unit: usize,
    /// Spectral cutoff of the unbounded band.
    pub cutoff: f64,
    /// Samples per interval when scanning for eigenvalues.
    pub bound_samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { nodes_per_band: 48, nodes_per_unit: 16, cutoff: 121.0, bound_samples: 160 }
    }
}

impl GridConfig {
    /// Every node count doubled; used for self-convergence checks.
    pub fn doubled(&self) -> Self {
        Self { nodes_per_band: 2 * self.nodes_per_band, nodes_per_unit: 2 * self.nodes_per_unit, bound_samples: 2 * self.bound_samples, ..*self }
    }

    /// Every node count halved; the coarse level of an error estimate.
    pub fn halved(&self) -> Self {
        Self { nodes_per_band: (self.nodes_per_band / 2).max(4), nodes_per_unit: (self.nodes_per_unit / 2).max(2), bound_samples: (self.bound_samples / 2).max(8), ..*self }
    }
}

/// One band piece with its quadrature and the coefficients at its nodes
/// (upper rim).
#[derive(Clone, Debug, PartialEq)]
pub struct BandGrid {
    pub lo: f64,
    /// Upper end; the cutoff for the unbounded band.
    pub hi: f64,
    pub semi_infinite: bool,
    pub n: usize,
    pub lambda: Vec<f64>,
    pub weight: Vec<f64>,
    pub r: Vec<C64>,
    pub t: Vec<C64>,
}

impl BandGrid {
    /// Quadrature nodes and weights for a piece; deterministic in its inputs.
    pub fn rule(lo: f64, hi: f64, semi_infinite: bool, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let band = if semi_infinite { Band::semi_infinite(lo) } else { Band::finite(lo, hi) };
        let rule = band_quadrature(band, Singularity::SqrtMapped, n, semi_infinite.then_some(hi))?;
        Ok((rule.nodes, rule.weights))
    }

    pub fn empty(lo: f64, hi: f64, semi_infinite: bool, n: usize) -> Result<Self> {
        let (lambda, weight) = Self::rule(lo, hi, semi_infinite, n)?;
        let m = lambda.len();
        Ok(Self { lo, hi, semi_infinite, n, lambda, weight, r: vec![C64::default(); m], t: vec![C64::default(); m] })
    }

    pub fn same_piece(&self, other: &BandGrid) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.n == other.n && self.semi_infinite == other.semi_infinite
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringData {
    pub bands_plus: Vec<BandGrid>,
    pub bands_minus: Vec<BandGrid>,
    pub bound: Vec<BoundState>,
    pub edges: Vec<EdgeFit>,
    pub partition: Partition,
}

impl ScatteringData {
    pub fn bands(&self, side: Side) -> &[BandGrid] {
        match side {
            Side::Plus => &self.bands_plus,
            Side::Minus => &self.bands_minus,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.bound.iter().map(|b| b.lambda).collect()
    }

    pub fn gamma(&self, side: Side) -> Vec<f64> {
        self.bound
            .iter()
            .map(|b| match side {
                Side::Plus => b.gamma_plus,
                Side::Minus => b.gamma_minus,
            })
            .collect()
    }

    pub fn virtual_levels(&self) -> Vec<&EdgeFit> {
        self.edges.iter().filter(|e| e.virtual_level).collect()
    }

    /// The partial data `𝒮±`: `R±` on `σ±`, `|T∓|²` on `σ∓⁽¹⁾`, eigenvalues
    /// and `γ±`. Everything else is set to NaN so any use of it shows.
    pub fn restricted(&self, side: Side) -> Self {
        let mut d = self.clone();
        let nan = C64::new(f64::NAN, f64::NAN);
        let other_sigma2: Vec<bool> = d.bands(side.opposite()).iter().map(|p| self.in_sigma2(p)).collect();
        let (own, other) = match side {
            Side::Plus => (&mut d.bands_plus, &mut d.bands_minus),
            Side::Minus => (&mut d.bands_minus, &mut d.bands_plus),
        };
        for p in own.iter_mut() {
            p.t.iter_mut().for_each(|v| *v = nan);
        }
        for (p, s2) in other.iter_mut().zip(other_sigma2) {
            p.r.iter_mut().for_each(|v| *v = nan);
            if s2 {
                p.t.iter_mut().for_each(|v| *v = nan);
            }
        }
        for b in &mut d.bound {
            match side {
                Side::Plus => b.gamma_minus = f64::NAN,
                Side::Minus => b.gamma_plus = f64::NAN,
            }
        }
        d
    }

    /// Whether a band piece lies in the spectrum of multiplicity two.
    pub fn in_sigma2(&self, piece: &BandGrid) -> bool {
        let m = piece.midpoint();
        self.partition.sigma2.iter().any(|i| m > i.lo && m < i.hi)
    }
}

/// Splits a background spectrum at every edge of the other spectrum and
/// lays quadrature rules on the pieces.
pub fn band_pieces(own: &Background, other: &Background, grid: &GridConfig) -> Result<Vec<BandGrid>> {
    let last_edge = own.edges().into_iter().chain(other.edges()).fold(f64::NEG_INFINITY, f64::max);
    if !(grid.cutoff > last_edge) {
        return Err(Error::InvalidInput(format!("spectral cutoff {} must exceed every band edge ({last_edge})", grid.cutoff)));
    }
    let cuts = other.edges();
    let mut out = Vec::new();
    for b in &own.bands {
        let hi = b.hi.unwrap_or(grid.cutoff);
        let mut pts = vec![b.lo];
        pts.extend(cuts.iter().copied().filter(|&c| c > b.lo + 1e-12 && c < hi - 1e-12));
        pts.push(hi);
        for (j, w) in pts.windows(2).enumerate() {
            let semi = b.hi.is_none() && j == pts.len() - 2;
            let n = if semi { grid.nodes_per_unit * ((hi - w[0]).sqrt().ceil() as usize).max(1) } else { grid.nodes_per_band };
            out.push(BandGrid::empty(w[0], w[1], semi, n)?);
        }
    }
    Ok(out)
}

/// Fills `R`, `T` at every node of the pieces.
fn fill(pot: &Potential, side: Side, pieces: &mut [BandGrid]) -> Result<()> {
    use rayon::prelude::*;
    for piece in pieces.iter_mut() {
        let vals: Vec<(C64, C64)> = piece.lambda.par_iter().map(|&l| scattering_at(pot, side, SpecPoint::Upper(l), 0.0).map(|s| (s.r, s.t))).collect::<Result<_>>()?;
        for (i, (r, t)) in vals.into_iter().enumerate() {
            piece.r[i] = r;
            piece.t[i] = t;
        }
    }
    Ok(())
}

/// Computes the full scattering data of `pot`.
pub fn build_scattering_data(pot: &Potential, grid: &GridConfig) -> Result<ScatteringData> {
    let partition = Partition::new(&pot.minus, &pot.plus);
    let mut bands_plus = band_pieces(&pot.plus, &pot.minus, grid)?;
    let mut bands_minus = band_pieces(&pot.minus, &pot.plus, grid)?;
    fill(pot, Side::Plus, &mut bands_plus)?;
    fill(pot, Side::Minus, &mut bands_minus)?;
    let search = find_bound_states(pot, &partition, grid.bound_samples)?;
    if let Some(l) = search.unresolved.first() {
        return Err(Error::Unresolved(format!("eigenvalue candidate {l} is too close to a band edge to isolate")));
    }
    let edges = classify_edges(pot, &partition)?;
    Ok(ScatteringData { bands_plus, bands_minus, bound: search.states, edges, partition })
}

fn g_values(bg: &Background, lambda: &[f64]) -> Result<Vec<C64>> {
    lambda.iter().map(|&l| bg.g(SpecPoint::Upper(l))).collect()
}

fn sup<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Necessary conditions that hold for data of any admissible
/// potential: phase relation on the simple spectrum, unitarity and
/// consistency on the double spectrum, and `T₊g₊ = T₋g₋`.
pub fn necessary_conditions(data: &ScatteringData, minus: &Background, plus: &Background, tol: f64) -> Result<Vec<Check>> {
    let mut phase = 0.0f64;
    let mut unitarity = 0.0f64;
    let mut consistency = 0.0f64;
    let mut tg = 0.0f64;
    for side in [Side::Plus, Side::Minus] {
        let (own_bg, other_bg) = if side == Side::Plus { (plus, minus) } else { (minus, plus) };
        for piece in data.bands(side) {
            if data.in_sigma2(piece) {
                let other = data
                    .bands(side.opposite())
                    .iter()
                    .find(|o| o.same_piece(piece))
                    .ok_or_else(|| Error::InvalidInput(format!("no matching {} piece for [{}, {}]", side.opposite().label(), piece.lo, piece.hi)))?;
                let g_own = g_values(own_bg, &piece.lambda)?;
                let g_other = g_values(other_bg, &piece.lambda)?;
                for i in 0..piece.lambda.len() {
                    let (r, t) = (piece.r[i], piece.t[i]);
                    let ratio = (g_own[i] / g_other[i]).re;
                    unitarity = sup([unitarity, (1.0 - r.norm_sqr() - ratio * t.norm_sqr()).abs()]);
                    consistency = sup([consistency, (r.conj() * t + other.r[i] * t.conj()).norm()]);
                    let a = t * g_own[i];
                    let b = other.t[i] * g_other[i];
                    tg = sup([tg, (a - b).norm() / a.norm().max(b.norm())]);
                }
            } else {
                for i in 0..piece.lambda.len() {
                    let (r, t) = (piece.r[i], piece.t[i]);
                    phase = sup([phase, (t / t.conj() - r).norm()]);
                }
            }
        }
    }
    Ok(vec![
        Check::below("phase_relation_simple_spectrum", phase, tol),
        Check::below("unitarity_double_spectrum", unitarity, tol),
        Check::below("consistency_double_spectrum", consistency, tol),
        Check::below("transmission_green_identity", tg, 1e-8),
    ])
}

/// Checks that need the potential: rim conjugation, Wronskian constancy,
/// the eigenvalue derivative identity and high-energy asymptotics.
pub fn potential_checks(pot: &Potential, data: &ScatteringData) -> Result<Vec<Check>> {
    let mut conj = 0.0f64;
    for side in [Side::Plus, Side::Minus] {
        for piece in data.bands(side) {
            for i in (0..piece.lambda.len()).step_by(7) {
                let l = piece.lambda[i];
                let lo = scattering_at(pot, side, SpecPoint::Lower(l), 0.0)?;
                conj = sup([conj, (lo.r.conj() - piece.r[i]).norm(), (lo.t.conj() - piece.t[i]).norm()]);
            }
        }
    }
    let xs = [pot.window.0 * 0.8, pot.window.0 * 0.3, 0.0, pot.window.1 * 0.3, pot.window.1 * 0.8];
    let mut spread = 0.0f64;
    for piece in data.bands_plus.iter().chain(&data.bands_minus) {
        let l = piece.lambda[piece.lambda.len() / 2];
        spread = sup([spread, wronskian_spread(pot, SpecPoint::Upper(l), crate::background::Regularization::Delta, &xs)?]);
    }
    let z = C64::new(pot.plus.bottom() - 0.7, 0.9);
    spread = sup([spread, wronskian_spread(pot, SpecPoint::Complex(z), crate::background::Regularization::Delta, &xs)?]);
    let identity = sup(data.bound.iter().map(|b| b.identity_residual()));
    let mut high = 0.0f64;
    for side in [Side::Plus, Side::Minus] {
        let s = scattering_at(pot, side, SpecPoint::Upper(1e3), 0.0)?;
        high = sup([high, (s.t - 1.0).norm(), s.r.norm()]);
    }
    Ok(vec![
        Check::below("rim_conjugation", conj, 1e-8),
        Check::below("wronskian_x_independence", spread, 1e-10),
        Check::below("eigenvalue_derivative_identity", identity, 1e-4),
        Check::below("high_energy_asymptotics", high, 0.1),
        Check::below("norming_constants_positive", if data.bound.iter().all(|b| b.gamma_plus > 0.0 && b.gamma_minus > 0.0) { 0.0 } else { 1.0 }, 0.5),
    ])
}
