use scatter_core::background::{Regularization, Side, SpecPoint};
use scatter_core::direct::{self, bound, edges, GridConfig};
use scatter_core::numerics::C64;
use scatter_core::potential::builtin;

#[test]
fn free_jost_and_wronskian() {
    let p = builtin::free(5.0).unwrap();
    let z = C64::new(1.3, 0.4);
    let k = z.sqrt();
    for &x in &[-7.0, -1.0, 0.5, 6.0] {
        let s = direct::jost(&p, Side::Plus, SpecPoint::Complex(z), Regularization::None, x).unwrap();
        assert!((s.value - (C64::i() * k * x).exp()).norm() < 1e-9);
        let s = direct::jost(&p, Side::Minus, SpecPoint::Complex(z), Regularization::None, x).unwrap();
        assert!((s.value - (-C64::i() * k * x).exp()).norm() < 1e-9);
    }
    let w = direct::wronskian(&p, SpecPoint::Complex(z), Regularization::None).unwrap();
    assert!((w - 2.0 * C64::i() * k).norm() < 1e-9);
    let s = direct::scattering_at(&p, Side::Plus, SpecPoint::Upper(2.0), 0.0).unwrap();
    assert!((s.t - 1.0).norm() < 1e-9 && s.r.norm() < 1e-9);
}

#[test]
fn sech2_jost_at_bound_state() {
    let p = builtin::sech2(18.0).unwrap();
    let s = direct::jost(&p, Side::Plus, SpecPoint::Upper(-1.0), Regularization::None, 0.0).unwrap();
    assert!((s.value.re - 0.5).abs() < 1e-9, "{}", s.value);
    for &x in &[-2.0, 1.0, 3.0] {
        let s = direct::jost(&p, Side::Plus, SpecPoint::Upper(-1.0), Regularization::None, x).unwrap();
        assert!((s.value.re - 0.5 / f64::cosh(x)).abs() < 1e-9);
    }
    let w = direct::wronskian(&p, SpecPoint::Upper(-1.0), Regularization::None).unwrap();
    assert!(w.norm() < 1e-9);
}

#[test]
fn sech2_bound_state_and_norming_constants() {
    let p = builtin::sech2(18.0).unwrap();
    let part = scatter_core::background::Partition::new(&p.minus, &p.plus);
    let found = bound::find_bound_states(&p, &part, 160).unwrap();
    assert_eq!(found.states.len(), 1);
    let b = found.states[0];
    assert!((b.lambda + 1.0).abs() < 1e-6, "{}", b.lambda);
    assert!((b.gamma_plus.powi(2) - 2.0).abs() < 1e-4, "{}", b.gamma_plus.powi(2));
    assert!((b.gamma_minus.powi(2) - 2.0).abs() < 1e-4);
    assert!(b.identity_residual() < 1e-4, "{}", b.identity_residual());
    // dW/dz at -1 is 1/2 up to sign for the reflectionless well
    assert!((b.dw.abs() - 0.5).abs() < 1e-6);
}

#[test]
fn step_matches_plane_wave_matching() {
    let p = builtin::step(0.0, 1.0, 2.0).unwrap();
    let (k, kp) = (2.0f64, 3f64.sqrt());
    let s = direct::scattering_at(&p, Side::Minus, SpecPoint::Upper(4.0), 0.0).unwrap();
    let r = (k - kp) / (k + kp);
    assert!((s.r - r).norm() < 1e-9, "{}", s.r);
    assert!((s.t - 2.0 * k / (k + kp)).norm() < 1e-9);
    let sp = direct::scattering_at(&p, Side::Plus, SpecPoint::Upper(4.0), 0.0).unwrap();
    assert!((sp.r + r).norm() < 1e-9);
    let ratio = (s.g / sp.g).re;
    assert!((1.0 - s.r.norm_sqr() - ratio * s.t.norm_sqr()).abs() < 1e-9);
    // left solution is the plane wave on the left half-axis
    let f = direct::jost(&p, Side::Minus, SpecPoint::Upper(4.0), Regularization::None, -1.5).unwrap();
    assert!((f.value - C64::new(0.0, 3.0).exp()).norm() < 1e-9);
    // total reflection below the upper threshold
    let s = direct::scattering_at(&p, Side::Minus, SpecPoint::Upper(0.5), 0.0).unwrap();
    assert!((s.r.norm() - 1.0).abs() < 1e-10);
    let part = scatter_core::background::Partition::new(&p.minus, &p.plus);
    assert!(bound::find_bound_states(&p, &part, 80).unwrap().states.is_empty());
}

#[test]
fn high_energy_limits() {
    let p = builtin::step(0.0, 1.0, 2.0).unwrap();
    for side in [Side::Plus, Side::Minus] {
        let s = direct::scattering_at(&p, side, SpecPoint::Upper(1e3), 0.0).unwrap();
        assert!((s.t - 1.0).norm() < 0.1 && s.r.norm() < 0.1);
    }
}

#[test]
fn step_data_satisfies_necessary_conditions() {
    let p = builtin::step(0.0, 1.0, 2.0).unwrap();
    let grid = GridConfig { nodes_per_band: 24, nodes_per_unit: 8, cutoff: 64.0, bound_samples: 60 };
    let data = direct::build_scattering_data(&p, &grid).unwrap();
    assert!(data.bound.is_empty());
    for c in direct::necessary_conditions(&data, &p.minus, &p.plus, 1e-6).unwrap() {
        assert!(c.pass, "{c}");
    }
    for c in direct::potential_checks(&p, &data).unwrap() {
        assert!(c.pass, "{c}");
    }
}

#[test]
fn free_edge_is_virtual_level() {
    let p = builtin::free(3.0).unwrap();
    let part = scatter_core::background::Partition::new(&p.minus, &p.plus);
    let fit = edges::classify_edge(&p, 0.0, &part).unwrap();
    assert!(fit.virtual_level);
    assert!((fit.c - C64::new(0.0, 2.0)).norm() < 1e-3, "{}", fit.c);
}

#[test]
fn bump_edge_is_generic_with_total_reflection_limit() {
    let bg = scatter_core::background::Background::constant(Side::Plus, 0.0).unwrap();
    let p = builtin::bump(&bg, 0.8, 1.0, 8.0).unwrap();
    let part = scatter_core::background::Partition::new(&p.minus, &p.plus);
    let fit = edges::classify_edge(&p, 0.0, &part).unwrap();
    assert!(!fit.virtual_level && !fit.ambiguous);
    let s = direct::scattering_at(&p, Side::Plus, SpecPoint::Upper(1e-6), 0.0).unwrap();
    assert!((s.r + 1.0).norm() < 1e-2, "{}", s.r);
}
