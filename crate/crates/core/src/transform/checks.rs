//! Checks on transformation kernels: the diagonal identity, the Jost
//! solutions they generate, their estimates and agreement with GLM rows.

use super::solve::TriangularKernel;
use crate::background::{Branch, Regularization, SpecPoint};
use crate::direct::jost;
use crate::error::Result;
use crate::glm::GlmSolver;
use crate::numerics::quadrature::composite_gauss;
use crate::numerics::C64;
use crate::potential::Potential;
use crate::report::Check;

/// `sup |K±(x,x) ∓ ½ ∫_x^{±∞}(q − p±)|` over `xs`.
pub fn diagonal_identity(k: &TriangularKernel, pot: &Potential, xs: &[f64]) -> Check {
    let worst = xs.iter().map(|&x| (k.diagonal(x) - 0.5 * pot.tail_integral(k.side, x, false)).abs()).fold(0.0, f64::max);
    Check::below(format!("transform_diagonal_identity_{}", k.side.label()), worst, 1e-5)
}

/// `ψ±(z,x) + ∫ K±(x,y) ψ±(z,y) dy` at `x`.
pub fn jost_from_kernel(k: &TriangularKernel, pot: &Potential, p: SpecPoint, x: f64) -> Result<C64> {
    let psi = pot.background(k.side).weyl(p, Branch::Weyl, Regularization::None)?;
    let end = k.support_end(x);
    let (a, b) = if end > x { (x, end) } else { (end, x) };
    let mut acc = psi.eval(x)?.value;
    if b - a > 1e-12 {
        let (ts, ws) = composite_gauss(a, b, ((b - a) / 0.25).ceil() as usize, 12);
        for (t, w) in ts.iter().zip(&ws) {
            acc += psi.eval(*t)?.value * (w * k.eval(x, *t));
        }
    }
    Ok(acc)
}

/// Relative mismatch of the kernel-generated Jost solutions against the
/// direct propagation at a few spectral points and positions.
pub fn jost_reconstruction(k: &TriangularKernel, pot: &Potential, xs: &[f64]) -> Result<Check> {
    let bg = pot.background(k.side);
    let e0 = bg.bottom();
    let points = [SpecPoint::Upper(e0 + 1.3), SpecPoint::Complex(C64::new(e0 - 1.0, 0.5)), SpecPoint::Upper(e0 + 9.0)];
    let mut worst: f64 = 0.0;
    for &p in &points {
        for &x in xs {
            let from_k = jost_from_kernel(k, pot, p, x)?;
            let direct = jost(pot, k.side, p, Regularization::None, x)?.value;
            worst = worst.max((from_k - direct).norm() / direct.norm().max(1.0));
        }
    }
    Ok(Check::below(format!("transform_jost_reconstruction_{}", k.side.label()), worst, 1e-6))
}

/// `sup |K(x,y)| / Q(x+y)` and `sup (|∂ₓK| + |∂ᵧK|) / (|q̂((x+y)/2)| + Q(x+y))`
/// over rows `xs`, with `Q(s) = ±∫_{s/2}^{±∞} |q − p±|`.
pub fn estimates(k: &TriangularKernel, pot: &Potential, xs: &[f64]) -> Vec<Check> {
    let side = k.side;
    let bg = pot.background(side);
    let q_of = |s: f64| pot.tail_integral(side, s / 2.0, true);
    let floor = 1e-6 * xs.iter().map(|&x| q_of(2.0 * x)).fold(0.0, f64::max).max(1e-300);
    let h = 1e-3;
    let (mut ratio, mut dratio): (f64, f64) = (0.0, 0.0);
    for &x in xs {
        let end = k.support_end(x);
        for i in 0..16 {
            let y = x + (end - x) * (i as f64 + 0.5) / 16.0;
            let q = q_of(x + y);
            if q <= floor {
                continue;
            }
            ratio = ratio.max(k.eval(x, y).abs() / q);
            let dx = (k.eval(x + h, y) - k.eval(x - h, y)) / (2.0 * h);
            let dy = (k.eval(x, y + h) - k.eval(x, y - h)) / (2.0 * h);
            let m = 0.5 * (x + y);
            dratio = dratio.max((dx.abs() + dy.abs()) / ((pot.q(m) - bg.q(m)).abs() + q));
        }
    }
    let label = side.label();
    vec![Check::info(format!("transform_estimate_ratio_{label}"), ratio), Check::info(format!("transform_derivative_ratio_{label}"), dratio)]
}

/// `sup |K_transform − K_GLM|` on rows `xs`, each sampled at `per_row`
/// points of its support.
pub fn compare_with_glm(k: &TriangularKernel, glm: &GlmSolver, xs: &[f64], per_row: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for &x in xs {
        let row = glm.row(x)?;
        let end = k.support_end(x);
        let ys: Vec<f64> = (0..per_row).map(|i| x + (end - x) * i as f64 / per_row as f64).collect();
        let kg = glm.kernel_at(&row, &ys)?;
        for (y, g) in ys.iter().zip(kg) {
            worst = worst.max((k.eval(x, *y) - g).abs());
        }
    }
    Ok(Check::below(format!("kernel_equivalence_{}", k.side.label()), worst, 1e-5))
}
