//! Kernel diagnostics: symmetry and the decay estimates of `F±` against
//! `Q±(s) = ±∫_{s/2}^{±∞} |q − p±|`.

use super::kernel::GlmKernel;
use crate::background::Side;
use crate::error::Result;
use crate::potential::Potential;
use crate::report::Check;

/// Deterministic scattered points in `[a, b]` (golden-ratio sequence).
fn scatter(a: f64, b: f64, n: usize, seed: f64) -> Vec<f64> {
    let phi = 0.618_033_988_749_894_9;
    (0..n).map(|i| a + (b - a) * (seed + phi * i as f64).fract()).collect()
}

/// `max |F(x,y) − F(y,x)|` over a sample of the window.
pub fn symmetry(kernel: &GlmKernel, window: (f64, f64)) -> Result<Check> {
    let xs = scatter(window.0, window.1, 40, 0.1);
    let ys = scatter(window.0, window.1, 40, 0.7);
    let mut worst: f64 = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        worst = worst.max((kernel.eval(x, y)? - kernel.eval(y, x)?).abs());
    }
    Ok(Check::below(format!("glm_symmetry_{}", kernel.side.label()), worst, 1e-9))
}

/// Measured constants of the three kernel estimates over the half window
/// facing `±∞`:
/// `sup |F|/Q(x+y)`, `sup |∂ₓF| / (|q−p|((x+y)/2) + Q(x+y))` and
/// `±∫_c^{±∞} |d F(x,x)/dx| (1 + x²)` from the window centre `c`, plus `sup |F|` where `Q` vanishes.
pub fn estimates(kernel: &GlmKernel, pot: &Potential) -> Result<Vec<Check>> {
    let side = kernel.side;
    let label = side.label();
    let (a, b) = pot.window;
    let bg = pot.background(side);
    let q_of = |s: f64| pot.tail_integral(side, s / 2.0, true);
    let scale = q_of(match side {
        Side::Plus => 2.0 * a,
        Side::Minus => 2.0 * b,
    });
    // Below this `Q` the ratio only measures quadrature noise.
    let floor = 1e-6 * scale.max(1e-300);
    let n = 24;
    let mut ratio: f64 = 0.0;
    let mut dratio: f64 = 0.0;
    let mut outside: f64 = 0.0;
    let h = 1e-4;
    // C±(x) may grow towards ∓∞, so sample the half facing ±∞
    let mid = 0.5 * (a + b);
    let (xa, xb) = match side {
        Side::Plus => (mid, b),
        Side::Minus => (a, mid),
    };
    for i in 0..n {
        let x = xa + (xb - xa) * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            // y on the side of x the equation uses, up to twice the window
            let t = (j as f64 + 0.5) / n as f64;
            let y = match side {
                Side::Plus => x + t * (2.0 * b - 2.0 * x + 2.0),
                Side::Minus => x - t * (2.0 * x - 2.0 * a + 2.0),
            };
            let f = kernel.eval(x, y)?;
            let q = q_of(x + y);
            if q > floor {
                ratio = ratio.max(f.abs() / q);
                let dfdx = (kernel.eval(x + h, y)? - kernel.eval(x - h, y)?) / (2.0 * h);
                let m = 0.5 * (x + y);
                let local = (pot.q(m) - bg.q(m)).abs();
                dratio = dratio.max(dfdx.abs() / (local + q));
            } else {
                outside = outside.max(f.abs());
            }
        }
    }
    let (lo, hi) = match side {
        Side::Plus => (mid, b + 1.0),
        Side::Minus => (a - 1.0, mid),
    };
    let m = 400;
    let mut moment = 0.0;
    for i in 0..m {
        let x = lo + (hi - lo) * (i as f64 + 0.5) / m as f64;
        let d = (kernel.eval(x + h, x + h)? - kernel.eval(x - h, x - h)?) / (2.0 * h);
        moment += d.abs() * (1.0 + x * x) * (hi - lo) / m as f64;
    }
    Ok(vec![
        Check::info(format!("glm_estimate_ratio_{label}"), ratio),
        Check::info(format!("glm_derivative_estimate_ratio_{label}"), dratio),
        Check::info(format!("glm_diagonal_moment_{label}"), moment),
        Check::info(format!("glm_kernel_past_support_{label}"), outside),
    ])
}
