use scatter_core::background::{Background, Side};
use scatter_core::potential::builtin;
use scatter_core::transform::{solve_transformation_kernel, EdgeResidueKernel, TransformConfig};

#[test]
fn residue_kernel_constant_background() {
    for side in [Side::Plus, Side::Minus] {
        let bg = Background::constant(side, 0.0).unwrap();
        let d = EdgeResidueKernel::new(&bg).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.f(0, 0.3, -1.2).unwrap() - 1.0).abs() < 1e-12);
        assert!((d.d(0.1, 0.2, 0.3, 0.4).unwrap() + side.sign() * 0.25).abs() < 1e-12);
    }
}

#[test]
fn residue_kernel_one_gap_diagonal_value() {
    for side in [Side::Plus, Side::Minus] {
        let bg = Background::lame(side, 0.5).unwrap();
        let d = EdgeResidueKernel::new(&bg).unwrap();
        assert_eq!(d.terms.len(), 3);
        for (x, y) in [(0.0, 0.0), (0.4, -1.3), (2.2, 0.7), (-3.1, 5.0)] {
            let v = d.d(x, y, y, x).unwrap();
            assert!((v + side.sign() * 0.25).abs() < 1e-7, "D({x},{y},{y},{x}) = {v}");
            let sym = d.d(x, y, 0.3, 0.9).unwrap() - d.d(y, x, 0.3, 0.9).unwrap();
            assert!(sym.abs() < 1e-12);
        }
    }
}

#[test]
fn reflectionless_kernel_closed_form() {
    let pot = builtin::sech2(12.0).unwrap();
    let t = std::time::Instant::now();
    let k = solve_transformation_kernel(&pot, Side::Plus, (-4.0, 12.0), &TransformConfig::default()).unwrap();
    eprintln!("solve {:?}, richardson correction {:e}", t.elapsed(), k.error);
    let mut worst: f64 = 0.0;
    for x in [-4.0f64, -1.0, 0.0, 0.5, 3.0] {
        for dy in [0.0, 0.3, 1.0, 4.0] {
            let y = x + dy;
            let exact = -2.0 * (-(x + y)).exp() / (1.0 + (-2.0 * x).exp());
            worst = worst.max((k.eval(x, y) - exact).abs());
        }
    }
    eprintln!("plus worst {worst:e}");
    assert!((k.diagonal(0.0) + 1.0).abs() < 1e-6);
    assert!(worst < 1e-6);
    let km = solve_transformation_kernel(&pot, Side::Minus, (-12.0, 4.0), &TransformConfig::default()).unwrap();
    let mut worst: f64 = 0.0;
    for x in [4.0f64, 1.0, 0.0, -0.5, -3.0] {
        for dy in [0.0, 0.3, 1.0, 4.0] {
            let y = x - dy;
            // mirror of the plus kernel for the even potential
            let exact = -2.0 * (x + y).exp() / (1.0 + (2.0 * x).exp());
            worst = worst.max((km.eval(x, y) - exact).abs());
        }
    }
    eprintln!("minus worst {worst:e}");
    assert!(worst < 1e-6);
}

#[test]
fn background_potential_gives_zero_kernel() {
    let pot = builtin::free(5.0).unwrap();
    let k = solve_transformation_kernel(&pot, Side::Plus, (-5.0, 5.0), &TransformConfig::default()).unwrap();
    assert!(k.eval(0.0, 1.0).abs() < 1e-14);
}

fn equivalence(pot: &scatter_core::potential::Potential) {
    use scatter_core::direct::{build_scattering_data, GridConfig};
    use scatter_core::glm::{central_window, GlmKernel, GlmSolver, NystromConfig};
    use scatter_core::transform::checks::{compare_with_glm, diagonal_identity, estimates, jost_reconstruction};
    let data = build_scattering_data(pot, &GridConfig::default()).unwrap();
    let (a, b) = central_window(pot.window, 0.6);
    let xs: Vec<f64> = (0..=8).map(|i| a + (b - a) * i as f64 / 8.0).collect();
    for side in [Side::Plus, Side::Minus] {
        let t = std::time::Instant::now();
        let k = solve_transformation_kernel(pot, side, (a, b), &TransformConfig::default()).unwrap();
        let ts = t.elapsed();
        let kernel = GlmKernel::new(&data, &pot.minus, &pot.plus, side, pot.window).unwrap();
        let solver = GlmSolver::new(&kernel, pot.window, NystromConfig::default());
        let mut checks = vec![diagonal_identity(&k, pot, &xs), jost_reconstruction(&k, pot, &xs[2..7]).unwrap(), compare_with_glm(&k, &solver, &xs, 24).unwrap()];
        checks.extend(estimates(&k, pot, &xs));
        eprintln!("{} {side:?}: transform {ts:?}, richardson {:e}", pot.name, k.error);
        for c in &checks {
            eprintln!("  {c}");
            assert!(c.pass, "{c}");
        }
    }
}

#[test]
fn kernels_agree_smooth_step() {
    equivalence(&builtin::smooth_step(0.0, 1.0, 0.5, 8.0).unwrap());
}

#[test]
fn kernels_agree_reflectionless() {
    equivalence(&builtin::sech2(12.0).unwrap());
}

#[test]
fn kernels_agree_lame_bump() {
    let bg = Background::lame(Side::Plus, 0.5).unwrap();
    equivalence(&builtin::bump(&bg, 0.5, 1.0, 7.0).unwrap());
}
