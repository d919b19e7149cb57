//! Fundamental system and monodromy of a periodic operator at a fixed `z`.

use std::sync::Arc;

use super::profile::FourierProfile;
use crate::error::Result;
use crate::numerics::{propagate_many, State, C64};

/// ODE tolerance for one-period tables.
pub const FLOQUET_TOL: f64 = 1e-12;

/// `c(z, x)` and `s(z, x)` tabulated over one period `[0, ℓ]`.
#[derive(Clone, Debug)]
pub struct FloquetTable {
    profile: Arc<FourierProfile>,
    z: C64,
    h: f64,
    c: Vec<State>,
    s: Vec<State>,
}

impl FloquetTable {
    pub fn new(profile: Arc<FourierProfile>, z: C64) -> Result<Self> {
        let period = profile.period;
        let nodes = ((period * (1.0 + z.norm().sqrt()) * 16.0).ceil() as usize).clamp(32, 1 << 15);
        let h = period / nodes as f64;
        let q = |x: f64| profile.eval(x);
        let mut c = Vec::with_capacity(nodes + 1);
        let mut s = Vec::with_capacity(nodes + 1);
        let mut y = [State::real(1.0, 0.0), State::real(0.0, 1.0)];
        c.push(y[0]);
        s.push(y[1]);
        for j in 0..nodes {
            y = propagate_many(&q, z, j as f64 * h, y, (j + 1) as f64 * h, FLOQUET_TOL)?;
            c.push(y[0]);
            s.push(y[1]);
        }
        Ok(Self { profile, z, h, c, s })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn period(&self) -> f64 {
        self.profile.period
    }

    /// `(c(ℓ), s(ℓ))`.
    pub fn monodromy(&self) -> (State, State) {
        (*self.c.last().unwrap(), *self.s.last().unwrap())
    }

    /// Floquet discriminant `Δ(z) = c(z, ℓ) + s'(z, ℓ)`.
    pub fn discriminant(&self) -> C64 {
        let (c, s) = self.monodromy();
        c.value + s.deriv
    }

    /// `(c(x), s(x))` for `x` in `[0, ℓ]`, by quintic Hermite interpolation
    /// of value, derivative and (from the equation) second derivative.
    pub fn basis(&self, x: f64) -> Result<(State, State)> {
        let last = self.c.len() - 1;
        let j = ((x / self.h).floor().max(0.0) as usize).min(last - 1);
        let x0 = j as f64 * self.h;
        let x1 = x0 + self.h;
        let t = ((x - x0) / self.h).clamp(0.0, 1.0);
        let (q0, q1) = (self.profile.eval(x0) - self.z, self.profile.eval(x1) - self.z);
        let interp = |a: &State, b: &State| hermite5(t, self.h, a, b, q0 * a.value, q1 * b.value);
        Ok((interp(&self.c[j], &self.c[j + 1]), interp(&self.s[j], &self.s[j + 1])))
    }
}

/// Quintic Hermite interpolation on `[x0, x0 + h]` at `x0 + t h` from values,
/// first and second derivatives at both ends; returns value and derivative.
fn hermite5(t: f64, h: f64, a: &State, b: &State, a2: C64, b2: C64) -> State {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    let d00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let d10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let d20 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    let d01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    let d11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let d21 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    let value = a.value * h00 + a.deriv * (h * h10) + a2 * (h * h * h20) + b.value * h01 + b.deriv * (h * h11) + b2 * (h * h * h21);
    let deriv = (a.value * d00 + b.value * d01) / h + a.deriv * d10 + b.deriv * d11 + (a2 * d20 + b2 * d21) * h;
    State::new(value, deriv)
}

/// Monodromy data `(c(ℓ), s(ℓ))` without tabulation.
pub fn monodromy(profile: &FourierProfile, z: C64, tol: f64) -> Result<(State, State)> {
    let q = |x: f64| profile.eval(x);
    let [c, s] = propagate_many(&q, z, 0.0, [State::real(1.0, 0.0), State::real(0.0, 1.0)], profile.period, tol)?;
    Ok((c, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_discriminant() {
        let p = Arc::new(FourierProfile::constant(0.5, 2.0));
        let z = C64::new(3.0, 0.2);
        let t = FloquetTable::new(p, z).unwrap();
        let k = (z - 0.5).sqrt();
        assert!((t.discriminant() - 2.0 * (k * 2.0).cos()).norm() < 1e-10);
        let (c, s) = t.basis(0.77).unwrap();
        assert!((c.value - (k * 0.77).cos()).norm() < 1e-10);
        assert!((s.value - (k * 0.77).sin() / k).norm() < 1e-10);
    }

    #[test]
    fn lame_band_edges_are_periodic_points() {
        let p = FourierProfile::lame(0.5, 0.0).unwrap();
        for (e, sign) in [(0.5, 2.0), (1.0, -2.0), (1.5, -2.0)] {
            let (c, s) = monodromy(&p, C64::new(e, 0.0), 1e-12).unwrap();
            assert!((c.value.re + s.deriv.re - sign).abs() < 1e-8, "edge {e}");
        }
    }
}
