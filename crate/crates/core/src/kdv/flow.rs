//! KdV flow of the backgrounds and the phase factors `e^{α±(λ,t)}`.

use crate::background::{Background, Branch, FourierProfile, Profile, Regularization, SpecPoint, WeylSolution};
use crate::error::{Error, Result};
use crate::numerics::quadrature::composite_gauss;
use crate::numerics::C64;

/// Least-squares speed `v` for which `p(x − vt)` solves
/// `u_t − 6uu_x + u_xxx = 0`, and the relative residual left over.
pub fn traveling_speed(profile: &FourierProfile) -> (f64, f64) {
    let n = 512;
    let h = profile.period / n as f64;
    let (mut num, mut den, mut scale) = (0.0, 0.0, 0.0f64);
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let x = j as f64 * h;
        let (p, p1, p3) = (profile.eval(x), profile.deriv_n(x, 1), profile.deriv_n(x, 3));
        let rest = p3 - 6.0 * p * p1;
        num += p1 * rest;
        den += p1 * p1;
        scale = scale.max(p3.abs()).max((6.0 * p * p1).abs());
        rows.push((p1, rest));
    }
    if den == 0.0 {
        return (0.0, 0.0);
    }
    let v = num / den;
    let worst = rows.iter().map(|(p1, rest)| (rest - v * p1).abs()).fold(0.0, f64::max);
    (v, worst / scale.max(f64::MIN_POSITIVE))
}

/// One background under the KdV flow: constants stay put, one-gap
/// profiles translate rigidly at their traveling speed.
#[derive(Clone, Debug)]
pub struct BackgroundFlow {
    pub initial: Background,
    pub speed: f64,
    /// Relative traveling-wave residual of the fitted speed.
    pub fit_residual: f64,
}

impl BackgroundFlow {
    pub fn new(bg: &Background) -> Result<Self> {
        match &bg.profile {
            Profile::Constant(_) => Ok(Self { initial: bg.clone(), speed: 0.0, fit_residual: 0.0 }),
            Profile::Periodic(p) => {
                if bg.gaps().len() > 1 {
                    return Err(Error::InvalidInput(format!("KdV evolution of a background with {} open gaps is not supported", bg.gaps().len())));
                }
                let (speed, fit_residual) = traveling_speed(p);
                Ok(Self { initial: bg.clone(), speed, fit_residual })
            }
        }
    }

    /// `u(x, t)`.
    pub fn q(&self, x: f64, t: f64) -> f64 {
        self.initial.q(x - self.speed * t)
    }

    fn slope(&self, x: f64) -> f64 {
        match &self.initial.profile {
            Profile::Constant(_) => 0.0,
            Profile::Periodic(p) => p.deriv(x),
        }
    }

    /// The background at time `t`.
    pub fn at(&self, t: f64) -> Result<Background> {
        self.initial.translated(self.speed * t)
    }

    fn solution(&self, p: SpecPoint) -> Result<WeylSolution> {
        self.initial.weyl(p, Branch::Weyl, Regularization::Delta)
    }

    /// `e^{α(λ,t)}`. A translated Floquet solution stays an eigenfunction of
    /// the flow generator, so `ψ(λ,x,t) = e^{κt} ψ₀(λ, x − vt)` with
    /// `κ = [(2(p + 2λ) + v)ψ₀' − p'ψ₀]/ψ₀`, constant in `x`.
    pub fn phase_factor(&self, p: SpecPoint, t: f64) -> Result<C64> {
        let z = p.z();
        if let Profile::Constant(c) = self.initial.profile {
            let m = self.initial.weyl(p, Branch::Weyl, Regularization::None)?.m();
            return Ok((2.0 * (c + 2.0 * z) * m * t).exp());
        }
        let psi = self.solution(p)?;
        let l = self.initial.period().unwrap();
        let mut best = (0.0, C64::default(), C64::default());
        for j in 0..8 {
            let y = j as f64 * l / 8.0;
            let s = psi.eval(y)?;
            if s.value.norm() > best.1.norm() {
                best = (y, s.value, s.deriv);
            }
        }
        let (y, v, d) = best;
        let kappa = ((2.0 * (self.initial.q(y) + 2.0 * z) + self.speed) * d - self.slope(y) * v) / v;
        let start = psi.eval(0.0)?.value;
        if start.norm() < 1e-300 {
            return Err(Error::Unresolved(format!("Weyl solution vanishes at x = 0 for λ = {z}")));
        }
        Ok((kappa * t).exp() * psi.eval(-self.speed * t)?.value / start)
    }

    /// `α(λ,t) = ∫₀ᵗ (2(u(0,s) + 2λ)m(λ,s) − u_x(0,s)) ds` by composite Gauss
    /// quadrature with `panels` panels, `m(λ,s) = ψ₀'(−vs)/ψ₀(−vs)`.
    pub fn alpha(&self, p: SpecPoint, t: f64, panels: usize) -> Result<C64> {
        let z = p.z();
        if let Profile::Constant(c) = self.initial.profile {
            let m = self.initial.weyl(p, Branch::Weyl, Regularization::None)?.m();
            return Ok(2.0 * (c + 2.0 * z) * m * t);
        }
        let psi = self.solution(p)?;
        let l = self.initial.period().unwrap();
        let size = (0..16).map(|j| psi.eval(j as f64 * l / 16.0).map(|s| s.value.norm())).collect::<Result<Vec<_>>>()?;
        let floor = 1e-8 * size.iter().cloned().fold(0.0, f64::max);
        let (ss, ws) = composite_gauss(0.0, t, panels.max(1), 8);
        let mut sum = C64::default();
        for (s, w) in ss.into_iter().zip(ws) {
            let y = -self.speed * s;
            let st = psi.eval(y)?;
            if st.value.norm() < floor {
                return Err(Error::Unresolved(format!("Dirichlet eigenvalue meets λ = {z} at time {s}")));
            }
            let m = st.deriv / st.value;
            sum += w * (2.0 * (self.initial.q(y) + 2.0 * z) * m - self.slope(y));
        }
        Ok(sum)
    }
}
