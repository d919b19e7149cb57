//! Acceptance suite: one PASS/FAIL line per criterion, followed by the
//! checks that failed. Runs without the test harness so the lines always
//! show; exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use scatter_core::background::{Background, Partition, Side};
use scatter_core::cli::cmd_roundtrip;
use scatter_core::direct::bound::find_bound_states;
use scatter_core::direct::{build_scattering_data, necessary_conditions, potential_checks, GridConfig, ScatteringData};
use scatter_core::glm::{central_window, reconstruct_potential, GlmConfig, GlmKernel, GlmSolver, NystromConfig, ReconstructionReport};
use scatter_core::io::RunConfig;
use scatter_core::kdv::{evolve_data, reconstruct_at, KdvConfig, KdvFlow};
use scatter_core::potential::{builtin, CubicSpline, Potential, Shape};
use scatter_core::report::Check;
use scatter_core::transform::checks::compare_with_glm;
use scatter_core::transform::{solve_transformation_kernel, TransformConfig};
use scatter_core::Result;

const UNITARITY: [&str; 3] = ["phase_relation_simple_spectrum", "unitarity_double_spectrum", "consistency_double_spectrum"];

struct Case {
    pot: Potential,
    data: ScatteringData,
    seconds: f64,
}

impl Case {
    fn new(pot: Potential) -> Result<Self> {
        let t = Instant::now();
        let data = build_scattering_data(&pot, &GridConfig::default())?;
        Ok(Self { pot, data, seconds: t.elapsed().as_secs_f64() })
    }

    fn name(&self) -> &str {
        &self.pot.name
    }
}

fn lame() -> Background {
    Background::lame(Side::Plus, 0.5).unwrap()
}

fn renamed(mut checks: Vec<Check>, prefix: &str) -> Vec<Check> {
    for c in &mut checks {
        c.name = format!("{prefix}/{}", c.name);
    }
    checks
}

fn pick(checks: Vec<Check>, names: &[&str]) -> Vec<Check> {
    checks.into_iter().filter(|c| names.contains(&c.name.as_str())).collect()
}

fn flag(name: impl Into<String>, ok: bool) -> Check {
    Check::below(name, if ok { 0.0 } else { 1.0 }, 0.5)
}

/// The unitarity checks evaluated on scattering data, with the runtime of the
/// direct solve.
fn unitarity(case: &Case) -> Result<Vec<Check>> {
    let t = Instant::now();
    let checks = pick(necessary_conditions(&case.data, &case.pot.minus, &case.pot.plus, 1e-6)?, &UNITARITY);
    let seconds = case.seconds + t.elapsed().as_secs_f64();
    let mut out = renamed(checks, case.name());
    if out.is_empty() {
        out.push(flag(format!("{}/unitarity_checks_present", case.name()), false));
    }
    out.push(Check::below(format!("{}/runtime_seconds", case.name()), seconds, 60.0));
    Ok(out)
}

fn criterion_1(step: &Case, lame_bump: &Case) -> Result<Vec<Check>> {
    let mut out = unitarity(step)?;
    out.extend(unitarity(lame_bump)?);
    Ok(out)
}

fn criterion_2(cases: &[&Case]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for c in cases {
        let mut checks = necessary_conditions(&c.data, &c.pot.minus, &c.pot.plus, 1e-6)?;
        checks.extend(potential_checks(&c.pot, &c.data)?);
        let picked = pick(checks, &["transmission_green_identity", "wronskian_x_independence"]);
        out.push(flag(format!("{}/identities_present", c.name()), picked.len() == 2));
        out.extend(renamed(picked, c.name()));
    }
    Ok(out)
}

fn criterion_3(sech2: &Case) -> Result<Vec<Check>> {
    let d = &sech2.data;
    let mut out = vec![Check::below("eigenvalue_count_error", (d.bound.len() as f64 - 1.0).abs(), 0.5)];
    if let Some(b) = d.bound.first() {
        out.push(Check::below("eigenvalue_error", (b.lambda + 1.0).abs(), 1e-6));
        out.push(Check::below("gamma_plus_squared_error", (b.gamma_plus.powi(2) - 2.0).abs(), 1e-4));
    }
    let identity = pick(potential_checks(&sech2.pot, d)?, &["eigenvalue_derivative_identity"]);
    out.push(flag("eigenvalue_identity_present", identity.len() == 1));
    out.extend(identity.into_iter().map(|c| Check::below(c.name, c.measured, 1e-4)));
    Ok(out)
}

/// Transformation-operator kernel against the GLM kernel on rows across the
/// central window.
fn criterion_4(cases: &[&Case]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for c in cases {
        let (a, b) = central_window(c.pot.window, 0.6);
        let xs: Vec<f64> = (0..=8).map(|i| a + (b - a) * i as f64 / 8.0).collect();
        for side in [Side::Plus, Side::Minus] {
            let k = solve_transformation_kernel(&c.pot, side, (a, b), &TransformConfig::default())?;
            let kernel = GlmKernel::new(&c.data, &c.pot.minus, &c.pot.plus, side, c.pot.window)?;
            let solver = GlmSolver::new(&kernel, c.pot.window, NystromConfig::default());
            out.push(compare_with_glm(&k, &solver, &xs, 24)?);
        }
        let last = out.len() - 2;
        out.splice(last.., renamed(out[last..].to_vec(), c.name()));
    }
    Ok(out)
}

struct Inverse {
    name: String,
    rec: ReconstructionReport,
}

fn reconstruct_all(cases: &[&Case]) -> Result<(Vec<Inverse>, f64)> {
    let t = Instant::now();
    let mut out = Vec::new();
    for c in cases {
        let rec = reconstruct_potential(&c.data, &c.pot.minus, &c.pot.plus, c.pot.window, &GlmConfig::default(), &[Side::Plus, Side::Minus], Some(&c.pot))?;
        out.push(Inverse { name: c.name().to_string(), rec });
    }
    Ok((out, t.elapsed().as_secs_f64()))
}

fn inverse_checks(inv: &[Inverse], names: &[&str]) -> Vec<Check> {
    let mut out = Vec::new();
    for i in inv {
        let picked = pick(i.rec.checks.clone(), names);
        out.push(flag(format!("{}/checks_present", i.name), picked.len() == names.len()));
        out.extend(renamed(picked, &i.name));
    }
    out
}

fn criterion_5(inv: &[Inverse]) -> Vec<Check> {
    inverse_checks(inv, &["diagonal_identity_plus", "diagonal_identity_minus"])
        .into_iter()
        .map(|c| if c.name.ends_with("present") { c } else { Check::below(c.name, c.measured, 1e-5) })
        .collect()
}

/// Round trip and two-sided consistency; the runtime covers the direct and
/// inverse solves of all four potentials.
fn criterion_6(inv: &[Inverse], cases: &[&Case], glm_seconds: f64) -> Vec<Check> {
    let mut out: Vec<Check> = inverse_checks(inv, &["roundtrip_plus", "roundtrip_minus", "two_sided_consistency"])
        .into_iter()
        .map(|c| if c.name.ends_with("present") { c } else { Check::below(c.name, c.measured, 1e-3) })
        .collect();
    let direct: f64 = cases.iter().map(|c| c.seconds).sum();
    out.push(Check::below("runtime_seconds", direct + glm_seconds, 600.0));
    out
}

fn criterion_7(bump: &Case, free: &Case) -> Vec<Check> {
    let mut out = Vec::new();
    // the band node nearest the edge at 0
    let nearest = bump.data.bands_plus.iter().flat_map(|p| p.lambda.iter().zip(&p.r)).filter(|(l, _)| **l > 0.0).min_by(|a, b| a.0.total_cmp(b.0));
    match nearest {
        Some((l, r)) => out.push(Check::below("bump_total_reflection", (r + 1.0).norm(), 1e-2).with_note(format!("node λ = {l:.3e}"))),
        None => out.push(flag("bump_band_nodes_present", false)),
    }
    let edge = |c: &Case| c.data.edges.iter().find(|e| e.edge.abs() < 1e-12).cloned();
    match edge(bump) {
        Some(e) => out.push(flag("bump_edge_generic", !e.virtual_level && !e.ambiguous)),
        None => out.push(flag("bump_edge_present", false)),
    }
    match edge(free) {
        Some(e) => {
            out.push(flag("free_edge_virtual_level", e.virtual_level));
            out.push(Check::below("free_edge_coefficient", (e.c - scatter_core::numerics::C64::new(0.0, 2.0)).norm(), 1e-3));
        }
        None => out.push(flag("free_edge_present", false)),
    }
    out
}

fn criterion_8(sech2: &Case, step: &Case, lame_bump: &Case) -> Result<Vec<Check>> {
    let t = 0.1;
    let pot = &sech2.pot;
    let flow = KdvFlow::new(&pot.minus, &pot.plus)?;
    let cfg = KdvConfig { glm: GlmConfig { step: 0.05, ..GlmConfig::default() }, ..KdvConfig::default() };
    let s = reconstruct_at(&sech2.data, &flow, pot.window, t, &cfg)?;
    let err = s.x.iter().zip(&s.u).map(|(&x, u)| (u + 2.0 / (x - 4.0 * t).cosh().powi(2)).abs()).fold(0.0, f64::max);
    let mut out = vec![Check::below("soliton_translation", err, 1e-3)];

    let ev = evolve_data(&sech2.data, &flow, t, 1e-6)?;
    let (b0, b) = (sech2.data.bound[0], ev.data.bound[0]);
    let ratio = (b.gamma_plus / b0.gamma_plus).powi(2);
    out.push(Check::below("norming_constant_growth", (ratio / (8.0 * t).exp() - 1.0).abs(), 1e-6));

    let spline = CubicSpline::new(s.x.clone(), s.u.clone())?;
    let window = (s.x[0], *s.x.last().unwrap());
    let q = Potential::new("soliton_t", s.evolved.minus.clone(), s.evolved.plus.clone(), window, Shape::Sampled(spline))?;
    let found = find_bound_states(&q, &Partition::new(&q.minus, &q.plus), 160)?;
    out.push(Check::below("isospectral_count", (found.states.len() as f64 - sech2.data.bound.len() as f64).abs(), 0.5));
    let drift = found.states.iter().zip(&sech2.data.bound).map(|(a, b)| (a.lambda - b.lambda).abs()).fold(0.0, f64::max);
    out.push(Check::below("isospectral_drift", drift, 1e-5));

    for c in [sech2, step, lame_bump] {
        let fl = KdvFlow::new(&c.pot.minus, &c.pot.plus)?;
        let ev = evolve_data(&c.data, &fl, t, 1e-6)?;
        let picked = pick(ev.checks, &UNITARITY);
        out.push(flag(format!("{}@t/unitarity_checks_present", c.name()), !picked.is_empty()));
        out.extend(renamed(picked, &format!("{}@t", c.name())));
    }
    Ok(out)
}

const SELF_CONVERGENCE_CONFIGS: [(&str, &str); 3] = [
    ("sech2", "[potential]\nname = sech2\nwindow = 12\nterms = sech2 -2 0 1\n"),
    ("smooth_step", "[background.plus]\nlevel = 1\n[potential]\nname = smooth_step\nwindow = 8\nblend = logistic\nwidth = 0.5\n"),
    ("lame_bump", "[background.minus]\nkind = lame\nm = 0.5\n[background.plus]\nkind = lame\nm = 0.5\n[potential]\nname = lame_bump\nwindow = 7\nterms = gaussian 0.5 0 1\n"),
];

/// Self-convergence of every reported quantity of the round trip, and of
/// the transformation-operator kernel against its Richardson estimate.
fn criterion_9(kernel_cases: &[&Case]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, text) in SELF_CONVERGENCE_CONFIGS {
        let cfg = RunConfig::parse(text, Path::new("."))?;
        let report = cmd_roundtrip(&cfg, None)?;
        let picked: Vec<Check> = report.checks.into_iter().filter(|c| c.name.starts_with("self_convergence_")).collect();
        out.push(flag(format!("{name}/self_convergence_present"), !picked.is_empty()));
        out.extend(renamed(picked, name));
    }
    for c in kernel_cases {
        let (a, b) = central_window(c.pot.window, 0.6);
        let base_cfg = TransformConfig::default();
        let base = solve_transformation_kernel(&c.pot, Side::Plus, (a, b), &base_cfg)?;
        let fine = solve_transformation_kernel(&c.pot, Side::Plus, (a, b), &base_cfg.refined())?;
        let mut change = 0.0f64;
        for i in 0..=8 {
            let x = a + (b - a) * i as f64 / 8.0;
            let end = base.support_end(x);
            for j in 0..24 {
                let y = x + (end - x) * j as f64 / 24.0;
                change = change.max((fine.eval(x, y) - base.eval(x, y)).abs());
            }
        }
        // the lattice values carry roundoff even when the estimate vanishes
        let error = base.error.max(1e-12);
        out.push(Check::below(format!("{}/transform_richardson", c.name()), change / error, 1.0).with_note("change under refinement / error estimate"));
    }
    Ok(out)
}

fn report(n: usize, title: &str, started: Instant, result: std::thread::Result<Result<Vec<Check>>>) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (pass, lines) = match result {
        Ok(Ok(checks)) => {
            let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("    {c}")).collect();
            let pass = !checks.is_empty() && failed.is_empty();
            let worst = checks.iter().filter(|c| c.tolerance.is_finite() && c.tolerance > 0.0).map(|c| c.measured / c.tolerance).fold(0.0, f64::max);
            let summary = format!("{} checks, worst measured/tol {worst:.2e}", checks.len());
            (pass, (summary, failed))
        }
        Ok(Err(e)) => (false, (format!("error: {e}"), vec![])),
        Err(_) => (false, ("panicked".to_string(), vec![])),
    };
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {status} {title}: {} [{secs:.1} s]", lines.0);
    for l in lines.1 {
        println!("{l}");
    }
    pass
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> bool {
    let t = Instant::now();
    report(n, title, t, catch_unwind(AssertUnwindSafe(f)))
}

fn main() {
    // `cargo test -- --list` and filters do not apply to this suite
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let setup = Instant::now();
    let free = Case::new(builtin::free(6.0).unwrap()).unwrap();
    let step = Case::new(builtin::step(0.0, 1.0, 4.0).unwrap()).unwrap();
    let smooth = Case::new(builtin::smooth_step(0.0, 1.0, 0.5, 8.0).unwrap()).unwrap();
    let sech2 = Case::new(builtin::sech2(12.0).unwrap()).unwrap();
    let mut lame_bump = Case::new(builtin::bump(&lame(), 0.5, 1.0, 7.0).unwrap()).unwrap();
    lame_bump.pot.name = "lame_bump".into();
    let zero = Background::constant(Side::Plus, 0.0).unwrap();
    let bump = Case::new(builtin::bump(&zero, 0.8, 1.0, 8.0).unwrap()).unwrap();
    println!("direct problems solved in {:.1} s", setup.elapsed().as_secs_f64());

    let four = [&free, &smooth, &sech2, &lame_bump];
    let mut ok = true;
    ok &= run(1, "unitarity", || criterion_1(&step, &lame_bump));
    ok &= run(2, "Wronskian identities", || criterion_2(&[&step, &smooth, &sech2, &lame_bump]));
    ok &= run(3, "bound-state oracle", || criterion_3(&sech2));
    ok &= run(4, "kernel equivalence", || criterion_4(&four));
    let t = Instant::now();
    let inverse = catch_unwind(AssertUnwindSafe(|| reconstruct_all(&four)));
    match inverse {
        Ok(Ok((inv, secs))) => {
            ok &= report(5, "diagonal identity", t, Ok(Ok(criterion_5(&inv))));
            ok &= report(6, "round trip", t, Ok(Ok(criterion_6(&inv, &four, secs))));
        }
        Ok(Err(e)) => {
            let msg = e.to_string();
            ok &= report(5, "diagonal identity", t, Ok(Err(e)));
            ok &= report(6, "round trip", t, Ok(Err(scatter_core::Error::Unresolved(msg))));
        }
        Err(_) => {
            ok &= report(5, "diagonal identity", t, Err(Box::new("panic")));
            ok &= report(6, "round trip", t, Err(Box::new("panic")));
        }
    }
    ok &= run(7, "edge behaviour", || Ok(criterion_7(&bump, &free)));
    ok &= run(8, "KdV", || criterion_8(&sech2, &step, &lame_bump));
    ok &= run(9, "self-convergence", || criterion_9(&[&smooth, &sech2]));
    if !ok {
        std::process::exit(1);
    }
}
