use super::*;

fn lame_plus() -> Background {
    static LAME: std::sync::OnceLock<Background> = std::sync::OnceLock::new();
    LAME.get_or_init(|| Background::lame(Side::Plus, 0.5).unwrap()).clone()
}

#[test]
fn constant_green_function() {
    let b = Background::constant(Side::Plus, 0.0).unwrap();
    assert!((b.g(SpecPoint::Complex(C64::new(-1.0, 0.0))).unwrap() - 0.5).norm() < 1e-15);
    assert!((b.g(SpecPoint::Upper(4.0)).unwrap() - C64::new(0.0, 0.25)).norm() < 1e-15);
    let b1 = Background::constant(Side::Plus, 1.0).unwrap();
    let psi = b1.weyl(SpecPoint::Upper(2.0), Branch::Weyl, Regularization::None).unwrap();
    for &x in &[-1.0, 0.0, 2.5] {
        assert!((psi.eval(x).unwrap().value - C64::new(0.0, x).exp()).norm() < 1e-14);
    }
}

#[test]
fn lame_spectrum() {
    let b = lame_plus();
    let e = b.edges();
    assert_eq!(e.len(), 3);
    for (got, want) in e.iter().zip([0.5, 1.0, 1.5]) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    assert_eq!(b.dirichlet.len(), 1);
    let d = b.dirichlet[0];
    assert!(d.mu > 1.0 + 1e-3 && d.mu < 1.5 - 1e-3);
    assert_ne!(d.class, PoleClass::Edge);
    let m = b.with_side(Side::Minus);
    assert_ne!(m.dirichlet[0].class, d.class);
}

#[test]
fn weyl_wronskian_identity() {
    let bgs = [Background::constant(Side::Plus, 0.3).unwrap(), Background::constant(Side::Minus, -0.2).unwrap(), lame_plus(), lame_plus().with_side(Side::Minus)];
    let mut seed = 7u64;
    let mut rnd = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for b in &bgs {
        for _ in 0..5 {
            let z = C64::new(-1.0 + 4.0 * rnd(), 0.1 + 2.0 * rnd());
            let p = SpecPoint::Complex(z);
            let g = b.g(p).unwrap();
            let w = b.weyl(p, Branch::Weyl, Regularization::None).unwrap();
            let v = b.weyl(p, Branch::Breve, Regularization::None).unwrap();
            let want = -b.side.sign() / g;
            let mut prev: Option<C64> = None;
            for &x in &[-1.3, 0.0, 2.1] {
                let wr = crate::numerics::wronskian(v.eval(x).unwrap(), w.eval(x).unwrap());
                assert!((wr - want).norm() < 1e-8 * want.norm().max(1.0), "{wr} vs {want}");
                if let Some(p) = prev {
                    assert!((wr - p).norm() < 1e-10 * want.norm().max(1.0), "drift {}", (wr - p).norm());
                }
                prev = Some(wr);
            }
            assert!(g.im > 0.0, "Herglotz at {z}");
        }
    }
}

#[test]
fn rims_are_conjugate_and_limit_from_above() {
    let b = lame_plus();
    for &l in &[0.7, 0.95, 2.0, 6.0] {
        let u = b.weyl(SpecPoint::Upper(l), Branch::Weyl, Regularization::None).unwrap();
        let lo = b.weyl(SpecPoint::Lower(l), Branch::Weyl, Regularization::None).unwrap();
        let c = b.weyl(SpecPoint::Complex(C64::new(l, 1e-7)), Branch::Weyl, Regularization::None).unwrap();
        for &x in &[-2.0, 0.4, 3.0] {
            let (a, bb) = (u.eval(x).unwrap().value, lo.eval(x).unwrap().value);
            assert!((a - bb.conj()).norm() < 1e-10);
            assert!((a - c.eval(x).unwrap().value).norm() < 1e-4, "rim mismatch at {l}");
        }
        assert!(b.g(SpecPoint::Upper(l)).unwrap().im > 0.0);
    }
}

#[test]
fn high_energy_asymptotics() {
    let b = lame_plus();
    let l = 1e3;
    let psi = b.weyl(SpecPoint::Upper(l), Branch::Weyl, Regularization::None).unwrap();
    for &x in &[0.5, 1.0, 2.0] {
        let v = psi.eval(x).unwrap().value * C64::new(0.0, -l.sqrt() * x).exp();
        assert!((v - 1.0).norm() < 0.1);
    }
}

#[test]
fn weyl_solves_background_equation() {
    let b = lame_plus();
    let z = C64::new(0.8, 0.3);
    let psi = b.weyl(SpecPoint::Complex(z), Branch::Weyl, Regularization::None).unwrap();
    let h = 1e-3;
    for &x in &[0.3, 4.0, 7.7] {
        let d2 = (psi.eval(x + h).unwrap().value - 2.0 * psi.eval(x).unwrap().value + psi.eval(x - h).unwrap().value) / (h * h);
        let r = -d2 + (b.q(x) - z) * psi.eval(x).unwrap().value;
        assert!(r.norm() < 1e-5, "residual {r}");
    }
    // decays to the right
    assert!(psi.eval(30.0).unwrap().value.norm() < 1e-2);
}

#[test]
fn regularized_weyl_at_dirichlet_pole() {
    let b = lame_plus();
    let mu = b.dirichlet[0].mu;
    let branch = if b.dirichlet[0].class == PoleClass::Weyl { Branch::Weyl } else { Branch::Breve };
    assert!(b.weyl(SpecPoint::Complex(C64::new(mu, 0.0)), branch, Regularization::None).is_err());
    let reg = if branch == Branch::Weyl { Regularization::Delta } else { Regularization::DeltaBreve };
    let w = b.weyl(SpecPoint::Complex(C64::new(mu, 0.0)), branch, reg).unwrap();
    assert!(w.a.norm() < 1e-9);
    assert!(w.b.norm() > 1e-3);
}

#[test]
fn spectral_pair_constant_gaussian() {
    let b = Background::constant(Side::Plus, 0.0).unwrap();
    let f = |y: f64| (-y * y).exp();
    let xs: Vec<f64> = (-8..=8).map(|j| j as f64 * 0.5).collect();
    let r = spectral::roundtrip_residual(&b, &f, (-9.0, 9.0), &xs, 24, 900.0).unwrap();
    assert!(r < 1e-6, "residual {r}");
    let zero = |_: f64| 0.0;
    assert_eq!(spectral::roundtrip_residual(&b, &zero, (-1.0, 1.0), &xs, 8, 50.0).unwrap(), 0.0);
}
