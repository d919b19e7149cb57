//! Jacobi `sn` and the complete elliptic integral `K` by the arithmetic–
//! geometric mean, for building one-gap Lamé profiles `2m sn²(x|m)`.

use std::f64::consts::PI;

fn agm_chain(m: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    for _ in 0..60 {
        let an = *a.last().unwrap();
        let cn = 0.5 * (an - b);
        let bn = (an * b).sqrt();
        a.push(0.5 * (an + b));
        c.push(cn);
        b = bn;
        if cn.abs() < 1e-17 {
            break;
        }
    }
    (a, c)
}

/// Complete elliptic integral of the first kind, parameter `m = k²`.
pub fn elliptic_k(m: f64) -> f64 {
    let (a, _) = agm_chain(m);
    PI / (2.0 * a.last().unwrap())
}

/// Jacobi `sn(u | m)` for `0 <= m < 1`.
pub fn jacobi_sn(u: f64, m: f64) -> f64 {
    if m == 0.0 {
        return u.sin();
    }
    let (a, c) = agm_chain(m);
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    phi.sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!((elliptic_k(0.0) - PI / 2.0).abs() < 1e-15);
        assert!((jacobi_sn(0.3, 0.0) - 0.3f64.sin()).abs() < 1e-15);
        // K(1/2) = 1.854074677301372
        assert!((elliptic_k(0.5) - 1.854_074_677_301_372).abs() < 1e-13);
        let k = elliptic_k(0.5);
        assert!((jacobi_sn(k, 0.5) - 1.0).abs() < 1e-12);
        // sn²(K/2) = 1 / (1 + k')
        let s = jacobi_sn(k / 2.0, 0.5);
        assert!((s * s - 1.0 / (1.0 + 0.5f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn solves_pendulum_identity() {
        // sn'² = (1 - sn²)(1 - m sn²)
        let m = 0.4;
        let h = 1e-5;
        for &u in &[0.1, 0.9, 1.7, 2.5] {
            let d = (jacobi_sn(u + h, m) - jacobi_sn(u - h, m)) / (2.0 * h);
            let s = jacobi_sn(u, m);
            assert!((d * d - (1.0 - s * s) * (1.0 - m * s * s)).abs() < 1e-8);
        }
    }
}
