use std::sync::OnceLock;

use scatter_core::background::{Background, Side};
use scatter_core::direct::{build_scattering_data, GridConfig, ScatteringData};
use scatter_core::glm::checks::{estimates, symmetry};
use scatter_core::glm::{partial_data_roundtrip, reconstruct_potential, GlmConfig, GlmKernel, GlmSolver, NystromConfig};
use scatter_core::potential::{builtin, Potential};

fn sech2() -> &'static (Potential, ScatteringData) {
    static CELL: OnceLock<(Potential, ScatteringData)> = OnceLock::new();
    CELL.get_or_init(|| {
        let pot = builtin::sech2(12.0).unwrap();
        let data = build_scattering_data(&pot, &GridConfig::default()).unwrap();
        (pot, data)
    })
}

fn smooth_step() -> &'static (Potential, ScatteringData) {
    static CELL: OnceLock<(Potential, ScatteringData)> = OnceLock::new();
    CELL.get_or_init(|| {
        let pot = builtin::smooth_step(0.0, 1.0, 0.5, 8.0).unwrap();
        let data = build_scattering_data(&pot, &GridConfig::default()).unwrap();
        (pot, data)
    })
}

#[test]
fn free_data_gives_zero_kernel() {
    let pot = builtin::free(6.0).unwrap();
    let data = build_scattering_data(&pot, &GridConfig { cutoff: 64.0, ..GridConfig::default() }).unwrap();
    let kernel = GlmKernel::new(&data, &pot.minus, &pot.plus, Side::Plus, pot.window).unwrap();
    for (x, y) in [(0.0, 0.0), (-3.0, 2.0), (1.0, 5.0)] {
        assert!(kernel.eval(x, y).unwrap().abs() < 1e-12);
    }
    let solver = GlmSolver::new(&kernel, pot.window, NystromConfig::default());
    assert!(solver.diagonal(0.5).unwrap().abs() < 1e-12);
}

#[test]
fn reflectionless_kernel_matches_closed_form() {
    let (pot, data) = sech2();
    let kernel = GlmKernel::new(data, &pot.minus, &pot.plus, Side::Plus, pot.window).unwrap();
    // F₊ = 2 e^{−(x+y)}
    for (x, y) in [(0.0, 0.0), (-1.0, 2.0), (0.5, 0.7)] {
        let f = kernel.eval(x, y).unwrap();
        assert!((f - 2.0 * (-(x + y)).exp()).abs() < 1e-8, "F({x},{y}) = {f}");
    }
    let solver = GlmSolver::new(&kernel, pot.window, NystromConfig::default());
    for x in [-2.0f64, 0.0, 1.5] {
        let row = solver.row(x).unwrap();
        assert!(row.residual < 1e-8);
        let ys = [x, x + 0.3, x + 2.0];
        let k = solver.kernel_at(&row, &ys).unwrap();
        for (y, k) in ys.iter().zip(k) {
            let exact = -2.0 * (-(x + y)).exp() / (1.0 + (-2.0 * x).exp());
            assert!((k - exact).abs() < 1e-8, "K({x},{y}) = {k}, expected {exact}");
        }
    }
}

#[test]
fn reflectionless_roundtrip_and_consistency() {
    let (pot, data) = sech2();
    let report = reconstruct_potential(data, &pot.minus, &pot.plus, pot.window, &GlmConfig::default(), &[Side::Plus, Side::Minus], Some(pot)).unwrap();
    for c in &report.checks {
        assert!(c.pass, "{c}");
    }
    assert!(report.discrepancy.unwrap() < 1e-4);
}

#[test]
fn step_roundtrip_checks_pass() {
    let (pot, data) = smooth_step();
    let report = reconstruct_potential(data, &pot.minus, &pot.plus, pot.window, &GlmConfig::default(), &[Side::Plus, Side::Minus], Some(pot)).unwrap();
    for c in &report.checks {
        assert!(c.pass, "{c}");
    }
}

#[test]
fn partial_data_matches_full_data() {
    let (pot, data) = smooth_step();
    for side in [Side::Plus, Side::Minus] {
        let report = partial_data_roundtrip(data, &pot.minus, &pot.plus, pot.window, &GlmConfig::default(), side, Some(pot)).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{c}");
        }
    }
}

#[test]
fn kernel_estimates_are_finite() {
    let (pot, data) = smooth_step();
    for side in [Side::Plus, Side::Minus] {
        let kernel = GlmKernel::new(data, &pot.minus, &pot.plus, side, pot.window).unwrap();
        assert!(symmetry(&kernel, pot.window).unwrap().pass);
        for c in estimates(&kernel, pot).unwrap() {
            eprintln!("{c}");
            assert!(c.measured.is_finite(), "{c}");
        }
    }
}

#[test]
fn lame_bump_roundtrip() {
    let bg = Background::lame(Side::Plus, 0.5).unwrap();
    let pot = builtin::bump(&bg, 0.5, 1.0, 7.0).unwrap();
    let data = build_scattering_data(&pot, &GridConfig::default()).unwrap();
    let report = reconstruct_potential(&data, &pot.minus, &pot.plus, pot.window, &GlmConfig::default(), &[Side::Plus, Side::Minus], Some(&pot)).unwrap();
    for c in &report.checks {
        eprintln!("{c}");
        assert!(c.pass, "{c}");
    }
}
