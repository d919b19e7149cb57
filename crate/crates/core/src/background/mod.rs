//! Constant and periodic background operators `-d²/dx² + p(x)`: spectra,
//! Weyl solutions, the Green's function diagonal `g`, and Dirichlet data.

pub mod elliptic;
pub mod floquet;
pub mod partition;
pub mod profile;
pub mod spectral;

use std::sync::Arc;

use rayon::prelude::*;

pub use floquet::FloquetTable;
pub use partition::{Interval, Partition};
pub use profile::FourierProfile;

use crate::error::{Error, Result};
use crate::numerics::{roots, State, C64};

/// Which half-line a background governs: `Minus` for `x → -∞`, `Plus` for `x → +∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}

/// `Weyl` decays towards this side's infinity; `Breve` towards the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Weyl,
    Breve,
}

/// A spectral parameter: a complex point, or a real point on the upper or
/// lower rim of the cut along the spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecPoint {
    Complex(C64),
    Upper(f64),
    Lower(f64),
}

impl SpecPoint {
    pub fn z(self) -> C64 {
        match self {
            SpecPoint::Complex(z) => z,
            SpecPoint::Upper(l) | SpecPoint::Lower(l) => C64::new(l, 0.0),
        }
    }

    pub fn conj(self) -> SpecPoint {
        match self {
            SpecPoint::Complex(z) => SpecPoint::Complex(z.conj()),
            SpecPoint::Upper(l) => SpecPoint::Lower(l),
            SpecPoint::Lower(l) => SpecPoint::Upper(l),
        }
    }

    /// `√(z - e)` with `Im ≥ 0`; on the rims the sign follows the rim.
    pub fn sqrt_from(self, e: f64) -> C64 {
        match self {
            SpecPoint::Complex(z) => {
                let r = (z - e).sqrt();
                if r.im < 0.0 {
                    -r
                } else {
                    r
                }
            }
            SpecPoint::Upper(l) if l >= e => C64::new((l - e).sqrt(), 0.0),
            SpecPoint::Lower(l) if l >= e => C64::new(-(l - e).sqrt(), 0.0),
            SpecPoint::Upper(l) | SpecPoint::Lower(l) => C64::new(0.0, (e - l).sqrt()),
        }
    }
}

/// Where a Dirichlet eigenvalue puts its pole for a given side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleClass {
    /// Simple pole of the Weyl branch.
    Weyl,
    /// Simple pole of the breve branch.
    Breve,
    /// At a band edge: square-root blow-up of both branches.
    Edge,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletPoint {
    pub mu: f64,
    pub class: PoleClass,
}

/// Spectral band `[lo, hi]`, `hi = None` for the last, unbounded band.
pub type SpectralBand = crate::numerics::Band;

#[derive(Clone, Debug)]
pub enum Profile {
    Constant(f64),
    Periodic(Arc<FourierProfile>),
}

/// Distance from a gap edge below which a Dirichlet eigenvalue is treated as sitting on it.
pub const EDGE_COINCIDENCE: f64 = 1e-8;
/// Gaps whose discriminant never exceeds `2 + GAP_EXCESS` are treated as closed.
pub const GAP_EXCESS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Background {
    pub side: Side,
    pub profile: Profile,
    pub bands: Vec<SpectralBand>,
    pub dirichlet: Vec<DirichletPoint>,
}

/// Multiplies a Weyl solution by one of the pole-removing products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularization {
    None,
    /// `δ`: simple poles of the Weyl branch.
    Delta,
    /// `δ̂`: simple poles times square roots at edge poles.
    DeltaHat,
    /// `δ̆`: simple poles of the breve branch times square roots at edge poles.
    DeltaBreve,
}

#[derive(Clone, Debug)]
enum WeylKind {
    Exponential,
    Floquet { table: Arc<FloquetTable>, rho: C64 },
}

/// `a·c(x) + b·s(x)`, extended from one period by its Floquet multiplier;
/// for constant backgrounds `a·e^{(b/a) x}`.
#[derive(Clone, Debug)]
pub struct WeylSolution {
    pub point: SpecPoint,
    pub a: C64,
    pub b: C64,
    kind: WeylKind,
}

impl WeylSolution {
    /// `ψ'(0)/ψ(0)`.
    pub fn m(&self) -> C64 {
        self.b / self.a
    }

    pub fn multiplier(&self) -> Option<C64> {
        match &self.kind {
            WeylKind::Exponential => None,
            WeylKind::Floquet { rho, .. } => Some(*rho),
        }
    }

    pub fn eval(&self, x: f64) -> Result<State> {
        match &self.kind {
            WeylKind::Exponential => {
                let m = self.b / self.a;
                let v = self.a * (m * x).exp();
                Ok(State::new(v, m * v))
            }
            WeylKind::Floquet { table, rho } => {
                let l = table.period();
                let n = (x / l).floor();
                let r = (x - n * l).clamp(0.0, l);
                let (c, s) = table.basis(r)?;
                let f = rho.powi(n as i32);
                Ok(State::new((c.value * self.a + s.value * self.b) * f, (c.deriv * self.a + s.deriv * self.b) * f))
            }
        }
    }

    /// Values at many points.
    pub fn eval_many(&self, xs: &[f64]) -> Result<Vec<State>> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Offset used to evaluate regularized products next to a Dirichlet pole.
const POLE_OFFSET: f64 = 1e-6;

impl Background {
    pub fn constant(side: Side, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite background level {c}")));
        }
        Ok(Self { side, profile: Profile::Constant(c), bands: vec![SpectralBand::semi_infinite(c)], dirichlet: vec![] })
    }

    /// Locates bands and Dirichlet eigenvalues of a periodic profile by
    /// scanning `scan = (lo, hi)` with `samples` discriminant evaluations.
    /// `lo` must lie below the spectrum; gaps above `hi` are taken as closed.
    pub fn periodic(side: Side, profile: FourierProfile, scan: (f64, f64), samples: usize) -> Result<Self> {
        let profile = Arc::new(profile);
        let disc = |l: f64| -> f64 {
            match floquet::monodromy(&profile, C64::new(l, 0.0), floquet::FLOQUET_TOL) {
                Ok((c, s)) => {
                    let d = c.value.re + s.deriv.re;
                    d * d - 4.0
                }
                Err(_) => f64::NAN,
            }
        };
        if !(disc(scan.0) > 0.0) {
            return Err(Error::InvalidInput(format!("scan start {} is not below the periodic spectrum", scan.0)));
        }
        let xtol = 1e-14 * (1.0 + scan.0.abs().max(scan.1.abs()));
        let n = samples.max(2);
        let grid: Vec<f64> = (0..=n).map(|i| scan.0 + (scan.1 - scan.0) * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid.par_iter().map(|&l| disc(l)).collect();
        if vals.iter().any(|v| v.is_nan()) {
            return Err(Error::Unresolved("monodromy failed during the band scan".into()));
        }
        let brackets: Vec<(f64, f64)> = (0..n).filter(|&i| (vals[i] < 0.0) != (vals[i + 1] < 0.0) && vals[i + 1] != 0.0).map(|i| (grid[i], grid[i + 1])).collect();
        let roots: Vec<f64> = brackets.par_iter().map(|&(a, b)| roots::bisect(&mut |l| disc(l), a, b, xtol)).collect();
        if roots.len().is_multiple_of(2) {
            return Err(Error::Unresolved(format!("periodic scan over [{}, {}] found {} band edges; the last band must be unbounded", scan.0, scan.1, roots.len())));
        }
        let mut edges = vec![roots[0]];
        for pair in roots[1..].chunks(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let mid = 0.5 * (lo + hi);
            if hi - lo < 1e-9 || disc(mid) < 4.0 * GAP_EXCESS {
                continue;
            }
            edges.push(lo);
            edges.push(hi);
        }
        let mut bands = Vec::new();
        for j in 0..edges.len() / 2 {
            bands.push(SpectralBand::finite(edges[2 * j], edges[2 * j + 1]));
        }
        bands.push(SpectralBand::semi_infinite(*edges.last().unwrap()));

        let sfun = |l: f64| -> f64 { floquet::monodromy(&profile, C64::new(l, 0.0), floquet::FLOQUET_TOL).map(|(_, s)| s.value.re).unwrap_or(f64::NAN) };
        let mut dirichlet = Vec::new();
        for j in 0..bands.len() - 1 {
            let lo = bands[j].hi.unwrap();
            let hi = bands[j + 1].lo;
            let (slo, shi) = (sfun(lo), sfun(hi));
            let mu = if (slo < 0.0) != (shi < 0.0) {
                roots::bisect(&mut |l| sfun(l), lo, hi, xtol)
            } else if slo.abs() < shi.abs() {
                lo
            } else {
                hi
            };
            let class = if mu - lo < EDGE_COINCIDENCE || hi - mu < EDGE_COINCIDENCE {
                PoleClass::Edge
            } else {
                let (_, s) = floquet::monodromy(&profile, C64::new(mu, 0.0), floquet::FLOQUET_TOL)?;
                // At μ the multipliers are c(ℓ) and s'(ℓ); the pole sits on s'(ℓ).
                let pole_on_small = s.deriv.re.abs() < 1.0;
                let weyl_small = side == Side::Plus;
                if pole_on_small == weyl_small {
                    PoleClass::Weyl
                } else {
                    PoleClass::Breve
                }
            };
            dirichlet.push(DirichletPoint { mu, class });
        }
        Ok(Self { side, profile: Profile::Periodic(profile), bands, dirichlet })
    }

    /// Lamé one-gap background `2m sn²(x + K/2 | m)`, spectrum `[m, 1] ∪ [1 + m, ∞)`.
    pub fn lame(side: Side, m: f64) -> Result<Self> {
        let shift = 0.5 * elliptic::elliptic_k(m);
        let profile = FourierProfile::lame(m, shift)?;
        Self::periodic(side, profile, (m - 0.5, 1.0 + m + 12.0), 800)
    }

    /// The background `p(x − d)`; spectra agree, Dirichlet data move.
    pub fn translated(&self, d: f64) -> Result<Self> {
        match &self.profile {
            Profile::Constant(_) => Ok(self.clone()),
            Profile::Periodic(p) => {
                let top = *self.edges().last().unwrap();
                Self::periodic(self.side, p.shift(-d), (self.bottom() - 0.5, top + 12.0), 800)
            }
        }
    }

    pub fn q(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::Constant(c) => *c,
            Profile::Periodic(p) => p.eval(x),
        }
    }

    pub fn period(&self) -> Option<f64> {
        match &self.profile {
            Profile::Constant(_) => None,
            Profile::Periodic(p) => Some(p.period),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.profile, Profile::Constant(_))
    }

    /// Band edges `E_0 < E_1 < … < E_{2r}`.
    pub fn edges(&self) -> Vec<f64> {
        let mut e = Vec::new();
        for b in &self.bands {
            e.push(b.lo);
            if let Some(h) = b.hi {
                e.push(h);
            }
        }
        e
    }

    pub fn bottom(&self) -> f64 {
        self.bands[0].lo
    }

    pub fn in_spectrum(&self, l: f64) -> bool {
        self.bands.iter().any(|b| b.contains(l))
    }

    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.bands.windows(2).map(|w| (w[0].hi.unwrap(), w[1].lo)).collect()
    }

    /// The mirror background `p(-x)` governing the opposite side.
    pub fn reflected(&self) -> Self {
        let profile = match &self.profile {
            Profile::Constant(c) => Profile::Constant(*c),
            Profile::Periodic(p) => Profile::Periodic(Arc::new(p.reflect())),
        };
        Self { side: self.side.opposite(), profile, bands: self.bands.clone(), dirichlet: self.dirichlet.clone() }
    }

    /// The same operator governing the other side (pole classes swap).
    pub fn with_side(&self, side: Side) -> Self {
        let mut out = self.clone();
        if side != self.side {
            for d in &mut out.dirichlet {
                d.class = match d.class {
                    PoleClass::Weyl => PoleClass::Breve,
                    PoleClass::Breve => PoleClass::Weyl,
                    PoleClass::Edge => PoleClass::Edge,
                };
            }
            out.side = side;
        }
        out
    }
}

impl Background {
    /// `δ`, `δ̂` or `δ̆` at `p` (1 for `Regularization::None`).
    pub fn delta(&self, p: SpecPoint, reg: Regularization) -> C64 {
        let z = p.z();
        let mut v = C64::new(1.0, 0.0);
        for d in &self.dirichlet {
            match (reg, d.class) {
                (Regularization::Delta | Regularization::DeltaHat, PoleClass::Weyl) => v *= z - d.mu,
                (Regularization::DeltaBreve, PoleClass::Breve) => v *= z - d.mu,
                (Regularization::DeltaHat | Regularization::DeltaBreve, PoleClass::Edge) => v *= p.sqrt_from(d.mu),
                _ => {}
            }
        }
        v
    }

    /// `(ρ_small, ρ_large)` at `p` plus the table. On a band the rim fixes
    /// which unimodular multiplier is "small".
    fn multipliers(profile: &Arc<FourierProfile>, p: SpecPoint) -> Result<(Arc<FloquetTable>, C64, C64)> {
        let table = Arc::new(FloquetTable::new(profile.clone(), p.z())?);
        let (c, s) = table.monodromy();
        let half = 0.5 * (c.value + s.deriv);
        let (small, large) = match p {
            SpecPoint::Complex(_) => {
                let d = (half * half - 1.0).sqrt();
                let (r1, r2) = (half + d, half - d);
                if r1.norm() <= r2.norm() {
                    (r1, r2)
                } else {
                    (r2, r1)
                }
            }
            SpecPoint::Upper(_) | SpecPoint::Lower(_) => {
                let h = half.re;
                if h.abs() < 1.0 {
                    let sgn = if s.value.re >= 0.0 { 1.0 } else { -1.0 };
                    let sgn = if matches!(p, SpecPoint::Lower(_)) { -sgn } else { sgn };
                    let r = C64::new(h, sgn * (1.0 - h * h).sqrt());
                    (r, r.conj())
                } else {
                    let d = (h * h - 1.0).sqrt();
                    let small = h - h.signum() * d;
                    (C64::new(small, 0.0), C64::new(1.0 / small, 0.0))
                }
            }
        };
        Ok((table, small, large))
    }

    fn weyl_raw(&self, p: SpecPoint, branch: Branch) -> Result<(C64, C64, WeylKind)> {
        match &self.profile {
            Profile::Constant(c) => {
                let k = p.sqrt_from(*c);
                let ik = C64::i() * k;
                let m = match (self.side, branch) {
                    (Side::Plus, Branch::Weyl) | (Side::Minus, Branch::Breve) => ik,
                    _ => -ik,
                };
                Ok((C64::new(1.0, 0.0), m, WeylKind::Exponential))
            }
            Profile::Periodic(profile) => {
                let (table, small, large) = Self::multipliers(profile, p)?;
                let rho = match (self.side, branch) {
                    (Side::Plus, Branch::Weyl) | (Side::Minus, Branch::Breve) => small,
                    _ => large,
                };
                let (c, s) = table.monodromy();
                let d1 = s.value;
                let d2 = rho - s.deriv;
                // Two equivalent forms of m; use the better-conditioned one.
                let (num, den) = if d1.norm() >= d2.norm() { (rho - c.value, d1) } else { (c.deriv, d2) };
                Ok((den, num, WeylKind::Floquet { table, rho }))
            }
        }
    }

    /// Weyl (or breve) solution at `p`, normalized to 1 at `x = 0` and
    /// multiplied by the requested regularizing product.
    pub fn weyl(&self, p: SpecPoint, branch: Branch, reg: Regularization) -> Result<WeylSolution> {
        let near_pole = self.dirichlet.iter().any(|d| (p.z() - d.mu).norm() < POLE_OFFSET * 0.1);
        if reg != Regularization::None && near_pole {
            let z = p.z();
            let shifted = |dz: f64| match p {
                SpecPoint::Complex(_) => SpecPoint::Complex(z + dz),
                SpecPoint::Upper(l) => SpecPoint::Upper(l + dz),
                SpecPoint::Lower(l) => SpecPoint::Lower(l + dz),
            };
            let lo = self.weyl_exact(shifted(-POLE_OFFSET), branch, reg)?;
            let hi = self.weyl_exact(shifted(POLE_OFFSET), branch, reg)?;
            let (_, _, kind) = self.weyl_raw(p, branch).or_else(|_| self.weyl_raw(shifted(POLE_OFFSET), branch))?;
            let mut out = WeylSolution { point: p, a: 0.5 * (lo.a + hi.a), b: 0.5 * (lo.b + hi.b), kind };
            if let WeylKind::Floquet { rho, .. } = &mut out.kind {
                if let (Some(r1), Some(r2)) = (lo.multiplier(), hi.multiplier()) {
                    *rho = 0.5 * (r1 + r2);
                }
            }
            return Ok(out);
        }
        self.weyl_exact(p, branch, reg)
    }

    fn weyl_exact(&self, p: SpecPoint, branch: Branch, reg: Regularization) -> Result<WeylSolution> {
        let (den, num, kind) = self.weyl_raw(p, branch)?;
        if den.norm() < 1e-10 * num.norm() && reg == Regularization::None {
            return Err(Error::Pole(format!("{:?} branch of the {} Weyl solution has a pole at {}", branch, self.side.label(), p.z())));
        }
        let f = self.delta(p, reg);
        let (a, b) = if den.norm() == 0.0 { (C64::default(), f * num) } else { (f, f * num / den) };
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Pole(format!("non-finite Weyl data at {}", p.z())));
        }
        Ok(WeylSolution { point: p, a, b, kind })
    }

    /// The (anti)periodic solution at band edge `e`, as a unit coefficient
    /// vector over `(c, s)`; the constant 1 for constant backgrounds.
    pub fn edge_solution(&self, e: f64) -> Result<WeylSolution> {
        let p = SpecPoint::Upper(e);
        match &self.profile {
            Profile::Constant(_) => Ok(WeylSolution { point: p, a: C64::new(1.0, 0.0), b: C64::default(), kind: WeylKind::Exponential }),
            Profile::Periodic(profile) => {
                let table = Arc::new(FloquetTable::new(profile.clone(), C64::new(e, 0.0))?);
                let (c, s) = table.monodromy();
                let rho = if (c.value + s.deriv).re >= 0.0 { 1.0 } else { -1.0 };
                // null vector of (M − ρ) acting on (a, b)
                let v1 = (s.value.re, rho - c.value.re);
                let v2 = (rho - s.deriv.re, c.deriv.re);
                let (a, b) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
                let n = a.hypot(b);
                if !(n > 0.0) {
                    return Err(Error::Singular(format!("no edge solution at {e}")));
                }
                let kind = WeylKind::Floquet { table, rho: C64::new(rho, 0.0) };
                Ok(WeylSolution { point: p, a: C64::new(a / n, 0.0), b: C64::new(b / n, 0.0), kind })
            }
        }
    }

    /// Diagonal of the background Green's function at `x = 0`.
    pub fn g(&self, p: SpecPoint) -> Result<C64> {
        match &self.profile {
            Profile::Constant(c) => Ok(C64::i() / (2.0 * p.sqrt_from(*c))),
            Profile::Periodic(profile) => {
                let (table, small, large) = Self::multipliers(profile, p)?;
                let (_, s) = table.monodromy();
                Ok(s.value / (large - small))
            }
        }
    }
}

#[cfg(test)]
mod tests;
