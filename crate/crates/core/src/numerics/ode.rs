//! Adaptive Dormand–Prince 5(4) propagation of `-y'' + q(x) y = z y`.
//!
//! The state is the pair `(y, y')`. Several independent solutions of the same
//! equation can be carried at once so that their Wronskian is propagated with
//! identical steps.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Value and derivative of a solution at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct State {
    pub value: C64,
    pub deriv: C64,
}

impl State {
    pub fn new(value: C64, deriv: C64) -> Self {
        Self { value, deriv }
    }

    pub fn real(value: f64, deriv: f64) -> Self {
        Self::new(C64::new(value, 0.0), C64::new(deriv, 0.0))
    }

    pub fn scale(self, c: C64) -> Self {
        Self::new(self.value * c, self.deriv * c)
    }

    pub fn conj(self) -> Self {
        Self::new(self.value.conj(), self.deriv.conj())
    }

    fn norm(&self) -> f64 {
        self.value.norm().max(self.deriv.norm())
    }
}

/// Wronskian `f g' - f' g`.
pub fn wronskian(f: State, g: State) -> C64 {
    f.value * g.deriv - f.deriv * g.value
}

pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 5_000_000;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[inline]
fn rhs(q: f64, z: C64, s: &State) -> (C64, C64) {
    (s.deriv, (q - z) * s.value)
}

/// Propagates `N` solutions from `x0` to `x1`. `tol` is a local error
/// tolerance relative to each solution's magnitude.
pub fn propagate_many<const N: usize, F>(coeff: &F, z: C64, x0: f64, y0: [State; N], x1: f64, tol: f64) -> Result<[State; N]>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("ode tolerance must be positive, got {tol}")));
    }
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = (0.05 / (1.0 + z.norm().sqrt())).min(span.abs());
    let mut k = [[(C64::default(), C64::default()); 7]; N];
    let mut steps = 0usize;
    loop {
        let remaining = (x1 - x).abs();
        if remaining <= 1e-15 * (1.0 + x1.abs()) {
            break;
        }
        let hs = h.min(remaining);
        if hs < 1e-13 * (1.0 + x.abs()) {
            return Err(Error::StepUnderflow { x });
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepUnderflow { x });
        }
        let hd = dir * hs;
        let mut qs = [0.0; 7];
        for (i, q) in qs.iter_mut().enumerate() {
            let xi = x + C[i] * hd;
            *q = coeff(xi);
            if !q.is_finite() {
                return Err(Error::NonFinite { x: xi });
            }
        }
        let mut err = 0.0f64;
        let mut ynew = y;
        for n in 0..N {
            for stage in 0..7 {
                let mut s = y[n];
                for j in 0..stage {
                    let a = A[stage][j] * hd;
                    if a != 0.0 {
                        s.value += k[n][j].0 * a;
                        s.deriv += k[n][j].1 * a;
                    }
                }
                k[n][stage] = rhs(qs[stage], z, &s);
                if stage == 6 {
                    ynew[n] = s;
                }
            }
            let mut ev = C64::default();
            let mut ed = C64::default();
            for stage in 0..7 {
                ev += k[n][stage].0 * (E[stage] * hd);
                ed += k[n][stage].1 * (E[stage] * hd);
            }
            let scale = y[n].norm().max(ynew[n].norm()).max(1e-300);
            err = err.max(ev.norm().max(ed.norm()) / (tol * scale));
        }
        if !err.is_finite() {
            h = hs * 0.2;
            continue;
        }
        if err <= 1.0 {
            x += hd;
            y = ynew;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = hs * fac;
        } else {
            h = hs * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    Ok(y)
}

/// Propagates a single solution from `x0` to `x1`.
pub fn propagate_ode<F>(coeff: &F, z: C64, x0: f64, y0: State, x1: f64, tol: f64) -> Result<State>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    propagate_many(coeff, z, x0, [y0], x1, tol).map(|[s]| s)
}

/// Propagates through a monotone sequence of output points, returning the
/// state at each. Stopping at each point also makes them safe breakpoints
/// for piecewise-continuous coefficients.
pub fn propagate_through<F>(coeff: &F, z: C64, x0: f64, y0: State, points: &[f64], tol: f64) -> Result<Vec<State>>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let mut out = Vec::with_capacity(points.len());
    let mut x = x0;
    let mut y = y0;
    for &p in points {
        y = propagate_ode(coeff, z, x, y, p, tol)?;
        x = p;
        out.push(y);
    }
    Ok(out)
}

/// Fundamental system `(c, s)` with `c(x0)=1, c'(x0)=0, s(x0)=0, s'(x0)=1`,
/// evaluated at `x1`.
pub fn fundamental<F>(coeff: &F, z: C64, x0: f64, x1: f64, tol: f64) -> Result<[State; 2]>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    propagate_many(coeff, z, x0, [State::real(1.0, 0.0), State::real(0.0, 1.0)], x1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plane_wave() {
        let s = propagate_ode(&|_| 0.0, C64::new(1.0, 0.0), 0.0, State::new(1.0.into(), C64::i()), PI, DEFAULT_TOL).unwrap();
        assert!((s.value - C64::new(-1.0, 0.0)).norm() < 1e-8);
        assert!((s.deriv - C64::new(0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn decaying_exponential() {
        let s = propagate_ode(&|_| 0.0, C64::new(-1.0, 0.0), 0.0, State::real(1.0, -1.0), 1.0, DEFAULT_TOL).unwrap();
        let e = (-1.0f64).exp();
        assert!((s.value.re - e).abs() < 1e-10 * 10.0);
        assert!((s.deriv.re + e).abs() < 1e-10 * 10.0);
    }

    #[test]
    fn sech_bound_state_backward() {
        // y = sech x solves -y'' - 2 sech^2 x y = -y.
        let q = |x: f64| -2.0 / x.cosh().powi(2);
        let x0: f64 = 5.0;
        let y0 = State::real(1.0 / x0.cosh(), -x0.tanh() / x0.cosh()).scale(x0.exp().into());
        let s = propagate_ode(&q, C64::new(-1.0, 0.0), x0, y0, 0.0, DEFAULT_TOL).unwrap();
        let scale = x0.exp();
        assert!((s.value.re / scale - 1.0).abs() < 1e-8);
        assert!((s.deriv.re / scale).abs() < 1e-8);
    }

    #[test]
    fn wronskian_preserved() {
        let q = |x: f64| (3.0 * x).sin() + 0.5 * x.cos();
        let z = C64::new(2.3, 0.4);
        let y0 = [State::real(1.0, 0.0), State::new(C64::new(0.2, 0.1), C64::new(1.0, -0.3))];
        let w0 = wronskian(y0[0], y0[1]);
        let y1 = propagate_many(&q, z, 0.0, y0, 6.0, 1e-12).unwrap();
        let w1 = wronskian(y1[0], y1[1]);
        assert!((w1 - w0).norm() / w0.norm() < 1e-10, "{w0} {w1}");
    }

    #[test]
    fn rejects_non_finite_coefficient() {
        let r = propagate_ode(&|_| f64::NAN, C64::new(1.0, 0.0), 0.0, State::real(1.0, 0.0), 1.0, 1e-8);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }
}
