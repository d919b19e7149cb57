//! Sign-change scanning and bisection.

use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Refines a sign-change bracket by bisection until it is narrower than
/// `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Scans `[a, b]` on `samples` equal subintervals and bisects every sign
/// change to `xtol`. Roots are ascending.
pub fn bracket_roots_with<F: FnMut(f64) -> f64>(mut f: F, interval: (f64, f64), max_roots: usize, samples: usize, xtol: f64) -> Result<Vec<f64>> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::InvalidInput(format!("empty root interval [{a}, {b}]")));
    }
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + i as f64 * h };
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(&mut f, x0, x1, xtol));
        }
        if roots.len() > max_roots {
            return Err(Error::IncompleteScan { a, b, max: max_roots });
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 && roots.last() != Some(&x0) {
        roots.push(x0);
    }
    Ok(roots)
}

/// Default scan: 400 samples, root tolerance 1e-10 relative to the interval.
pub fn bracket_roots<F: FnMut(f64) -> f64>(f: F, interval: (f64, f64), max_roots: usize) -> Result<Vec<f64>> {
    let xtol = 1e-13 * (1.0 + interval.0.abs().max(interval.1.abs()));
    bracket_roots_with(f, interval, max_roots, 400, xtol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quadratic() {
        let r = bracket_roots(|x| x * x - 1.0, (-2.0, 0.0), 4).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] + 1.0).abs() < DEFAULT_ROOT_TOL);
    }

    #[test]
    fn sine() {
        let r = bracket_roots(f64::sin, (1.0, 7.0), 4).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - PI).abs() < DEFAULT_ROOT_TOL);
        assert!((r[1] - 2.0 * PI).abs() < DEFAULT_ROOT_TOL);
    }

    #[test]
    fn too_many_roots() {
        let r = bracket_roots(|x| (10.0 * x).sin(), (0.1, 10.0), 3);
        assert!(matches!(r, Err(Error::IncompleteScan { .. })));
    }
}
