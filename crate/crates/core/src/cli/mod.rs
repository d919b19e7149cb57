//! The `scatter` commands as library functions: each returns a [`Report`]
//! and writes its artifacts.

use std::path::Path;
use std::time::Instant;

use crate::background::{Background, Partition, Side};
use crate::direct::bound::find_bound_states;
use crate::direct::{build_scattering_data, necessary_conditions, potential_checks, GridConfig, ScatteringData};
use crate::error::{Error, Result};
use crate::glm::{central_window, reconstruct_potential, sample_potential, GlmConfig, ReconstructionReport};
use crate::io::{load_data, report_to_json, save_data, to_canonical_string, write_columns, RunConfig};
use crate::kdv::{kdv_residual, moment_gate, reconstruct_at, sample_at, KdvConfig, KdvFlow, KdvSlice};
use crate::potential::{CubicSpline, Potential, Shape};
use crate::report::{self_convergence, Check, Quantity, Report};

/// Exit status: 0 when every check passes, 2 on a failed check or a
/// numerical failure, 3 on bad input.
pub fn exit_code(result: &Result<Report>) -> i32 {
    match result {
        Ok(r) if r.all_pass() => 0,
        Ok(_) => 2,
        Err(Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::InvalidInput(_)) => 3,
        Err(_) => 2,
    }
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    std::fs::write(path, to_canonical_string(&report_to_json(report)))?;
    Ok(())
}

/// Resolution levels used for the error estimate (coarse), the result
/// (base) and the self-convergence check (fine).
#[derive(Clone, Copy, Debug)]
struct Level {
    grid: GridConfig,
    glm: GlmConfig,
}

fn levels(cfg: &RunConfig) -> [Level; 3] {
    [Level { grid: cfg.grid.halved(), glm: cfg.glm.coarsened() }, Level { grid: cfg.grid, glm: cfg.glm }, Level { grid: cfg.grid.doubled(), glm: cfg.glm.refined() }]
}

/// Floors of the error estimates: the ODE tolerances limit scattering data,
/// the Nyström residual gate limits reconstructions.
const DATA_FLOOR: f64 = 1e-9;
const RECONSTRUCTION_FLOOR: f64 = 1e-8;

fn raw(name: impl Into<String>, x: Vec<f64>, values: Vec<f64>) -> Quantity {
    let n = values.len();
    Quantity { name: name.into(), x, values, errors: vec![f64::NAN; n] }
}

/// Base quantities with errors from the coarse run.
fn estimate(base: Vec<Quantity>, coarse: &[Quantity], floor: f64) -> Vec<Quantity> {
    base.into_iter()
        .map(|q| match coarse.iter().find(|c| c.name == q.name) {
            Some(c) => Quantity::estimated(q.name, q.x, q.values, (&c.x, &c.values), floor),
            None => Quantity::estimated(q.name, q.x, q.values, (&[], &[]), f64::NAN),
        })
        .collect()
}

fn data_quantities(data: &ScatteringData) -> Vec<Quantity> {
    let mut out = Vec::new();
    for (k, b) in data.bound.iter().enumerate() {
        out.push(raw(format!("eigenvalue_{k}"), vec![], vec![b.lambda]));
        out.push(raw(format!("gamma_plus_{k}"), vec![], vec![b.gamma_plus]));
        out.push(raw(format!("gamma_minus_{k}"), vec![], vec![b.gamma_minus]));
    }
    for side in [Side::Plus, Side::Minus] {
        let mass: f64 = data.bands(side).iter().map(|p| p.weight.iter().zip(&p.r).map(|(w, r)| w * r.norm_sqr()).sum::<f64>()).sum();
        out.push(raw(format!("reflection_mass_{}", side.label()), vec![], vec![mass]));
    }
    out
}

/// Indices of about `count` points of the grid `x` spread over `[a, b]`.
fn samples_in(x: &[f64], (a, b): (f64, f64), count: usize) -> Vec<usize> {
    let inside: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= a && x[i] <= b).collect();
    let stride = inside.len().div_ceil(count).max(1);
    inside.into_iter().step_by(stride).collect()
}

fn pick_samples(name: String, x: &[f64], v: &[f64], idx: &[usize]) -> Quantity {
    raw(name, idx.iter().map(|&i| x[i]).collect(), idx.iter().map(|&i| v[i]).collect())
}

/// `q̃±` at about one point per unit length of the reconstruction grid.
fn reconstruction_quantities(rec: &ReconstructionReport) -> Vec<Quantity> {
    let range = (rec.x[0], rec.x[rec.x.len() - 1]);
    let idx = samples_in(&rec.x, range, (range.1 - range.0).ceil() as usize);
    [Side::Plus, Side::Minus].iter().filter_map(|&s| rec.q(s).map(|q| pick_samples(format!("q_{}", s.label()), &rec.x, q, &idx))).collect()
}

fn sampled_quantities(data: &ScatteringData, minus: &Background, plus: &Background, window: (f64, f64), glm: &GlmConfig, xs: &[f64]) -> Result<Vec<Quantity>> {
    [Side::Plus, Side::Minus].iter().map(|&s| Ok(raw(format!("q_{}", s.label()), xs.to_vec(), sample_potential(data, minus, plus, window, glm, s, xs)?))).collect()
}

fn new_report(command: &str, cfg: &RunConfig) -> Report {
    let mut r = Report::new(command);
    r.config_digest = cfg.digest();
    r
}

fn timed<T>(report: &mut Report, label: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let out = f()?;
    report.timings.push((label.to_string(), t.elapsed().as_secs_f64()));
    Ok(out)
}

fn add_convergence(report: &mut Report, coarse: &[Quantity], base: Vec<Quantity>, fine: &[Quantity], floor: f64) {
    let base = estimate(base, coarse, floor);
    report.extend(self_convergence(&base, fine));
    report.quantities.extend(base);
}

fn direct_checks(pot: &Potential, data: &ScatteringData, tol: f64) -> Result<Vec<Check>> {
    let mut checks = necessary_conditions(data, &pot.minus, &pot.plus, tol)?;
    checks.extend(potential_checks(pot, data)?);
    checks.push(Check::info("eigenvalue_count", data.bound.len() as f64));
    checks.push(Check::info("virtual_level_count", data.virtual_levels().len() as f64));
    Ok(checks)
}

/// Computes scattering data, checks the necessary conditions and writes the data file.
pub fn cmd_direct(cfg: &RunConfig, out: Option<&Path>) -> Result<Report> {
    let mut report = new_report("direct", cfg);
    let pot = cfg.build_potential()?;
    let data = timed(&mut report, "direct", || build_scattering_data(&pot, &cfg.grid))?;
    report.extend(direct_checks(&pot, &data, cfg.tolerance)?);
    if cfg.self_convergence {
        let [c, _, f] = levels(cfg);
        let coarse = timed(&mut report, "direct_coarse", || build_scattering_data(&pot, &c.grid))?;
        let fine = timed(&mut report, "direct_fine", || build_scattering_data(&pot, &f.grid))?;
        add_convergence(&mut report, &data_quantities(&coarse), data_quantities(&data), &data_quantities(&fine), DATA_FLOOR);
    } else {
        report.quantities.extend(data_quantities(&data));
    }
    if let Some(out) = out {
        save_data(out, &data, &pot.minus, &pot.plus)?;
        report.outputs.push(out.display().to_string());
    }
    Ok(report)
}

fn both_sides(data: &ScatteringData, minus: &Background, plus: &Background, window: (f64, f64), glm: &GlmConfig, reference: Option<&Potential>) -> Result<ReconstructionReport> {
    reconstruct_potential(data, minus, plus, window, glm, &[Side::Plus, Side::Minus], reference)
}

fn write_reconstruction(path: &Path, rec: &ReconstructionReport) -> Result<()> {
    let qp = rec.q(Side::Plus).unwrap();
    let qm = rec.q(Side::Minus).unwrap();
    let gap: Vec<f64> = qp.iter().zip(qm).map(|(a, b)| (a - b).abs()).collect();
    write_columns(path, &["x", "q_plus", "q_minus", "discrepancy"], &[&rec.x, qp, qm, &gap])
}

/// Reconstructs the potential from a data file. Data failing a necessary
/// condition is rejected before any solve.
pub fn cmd_inverse(data_path: &Path, cfg: &RunConfig, out: Option<&Path>) -> Result<Report> {
    let mut report = new_report("inverse", cfg);
    let (data, minus, plus) = load_data(data_path)?;
    let window = cfg.window.ok_or_else(|| Error::Config("[potential] window is required for the inverse problem".into()))?;
    report.extend(necessary_conditions(&data, &minus, &plus, cfg.tolerance)?);
    if !report.all_pass() {
        return Ok(report);
    }
    let rec = timed(&mut report, "glm", || both_sides(&data, &minus, &plus, window, &cfg.glm, None))?;
    report.extend(rec.checks.iter().cloned());
    if cfg.self_convergence {
        let [c, _, f] = levels(cfg);
        let base = reconstruction_quantities(&rec);
        let xs = base[0].x.clone();
        let coarse = timed(&mut report, "glm_coarse", || sampled_quantities(&data, &minus, &plus, window, &c.glm, &xs))?;
        let fine = timed(&mut report, "glm_fine", || sampled_quantities(&data, &minus, &plus, window, &f.glm, &xs))?;
        add_convergence(&mut report, &coarse, base, &fine, RECONSTRUCTION_FLOOR);
    }
    if let Some(out) = out {
        write_reconstruction(out, &rec)?;
        report.outputs.push(out.display().to_string());
    }
    Ok(report)
}

/// Direct problem followed by the inverse one, compared with the input potential.
pub fn cmd_roundtrip(cfg: &RunConfig, out: Option<&Path>) -> Result<Report> {
    let mut report = new_report("roundtrip", cfg);
    let pot = cfg.build_potential()?;
    let data = timed(&mut report, "direct", || build_scattering_data(&pot, &cfg.grid))?;
    report.extend(direct_checks(&pot, &data, cfg.tolerance)?);
    let rec = timed(&mut report, "glm", || both_sides(&data, &pot.minus, &pot.plus, pot.window, &cfg.glm, Some(&pot)))?;
    report.extend(rec.checks.iter().cloned());
    if cfg.self_convergence {
        let [c, _, f] = levels(cfg);
        let base = reconstruction_quantities(&rec);
        let xs = base[0].x.clone();
        let run = |lv: Level, report: &mut Report, label: &str| -> Result<(ScatteringData, Vec<Quantity>)> {
            let d = timed(report, &format!("direct_{label}"), || build_scattering_data(&pot, &lv.grid))?;
            let q = timed(report, &format!("glm_{label}"), || sampled_quantities(&d, &pot.minus, &pot.plus, pot.window, &lv.glm, &xs))?;
            Ok((d, q))
        };
        let (dc, qc) = run(c, &mut report, "coarse")?;
        let (df, qf) = run(f, &mut report, "fine")?;
        add_convergence(&mut report, &data_quantities(&dc), data_quantities(&data), &data_quantities(&df), DATA_FLOOR);
        add_convergence(&mut report, &qc, base, &qf, RECONSTRUCTION_FLOOR);
    }
    if let Some(out) = out {
        write_reconstruction(out, &rec)?;
        report.outputs.push(out.display().to_string());
    }
    Ok(report)
}

fn time_label(t: f64) -> String {
    // shortest form that reads back as `t`
    format!("t={t}")
}

/// Largest eigenvalue shift of the reconstructed `u(·,t)` against the
/// eigenvalues of the initial data.
fn isospectrality(slice: &KdvSlice, initial: &[f64], samples: usize) -> Result<f64> {
    let spline = CubicSpline::new(slice.x.clone(), slice.u.clone())?;
    let window = (slice.x[0], *slice.x.last().unwrap());
    let q = Potential::new("u_t", slice.evolved.minus.clone(), slice.evolved.plus.clone(), window, Shape::Sampled(spline))?;
    let found = find_bound_states(&q, &Partition::new(&q.minus, &q.plus), samples)?;
    if found.states.len() != initial.len() {
        return Ok(f64::INFINITY);
    }
    Ok(found.states.iter().zip(initial).map(|(s, l)| (s.lambda - l).abs()).fold(0.0, f64::max))
}

fn kdv_slices(pot: &Potential, data: &ScatteringData, times: &[f64], cfg: &KdvConfig) -> Result<Vec<KdvSlice>> {
    let flow = KdvFlow::new(&pot.minus, &pot.plus)?;
    use rayon::prelude::*;
    times.par_iter().map(|&t| reconstruct_at(data, &flow, pot.window, t, cfg)).collect()
}

/// `u` at nine points of `range` for each slice; every point costs seven
/// GLM rows on the widened window at each level.
fn slice_quantities(slices: &[KdvSlice], range: (f64, f64)) -> Vec<Quantity> {
    slices.iter().map(|s| pick_samples(format!("u@{}", time_label(s.t)), &s.x, &s.u, &samples_in(&s.x, range, 9))).collect()
}

fn sampled_slices(pot: &Potential, data: &ScatteringData, base: &[Quantity], times: &[f64], cfg: &KdvConfig) -> Result<Vec<Quantity>> {
    let flow = KdvFlow::new(&pot.minus, &pot.plus)?;
    use rayon::prelude::*;
    times.par_iter().zip(base).map(|(&t, q)| Ok(raw(q.name.clone(), q.x.clone(), sample_at(data, &flow, pot.window, t, cfg, &q.x)?))).collect()
}

/// Solves the KdV initial value problem at the requested times.
pub fn cmd_kdv(cfg: &RunConfig, times: &[f64], out: Option<&Path>) -> Result<Report> {
    let mut report = new_report("kdv", cfg);
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Config("kdv needs a non-empty list of non-negative times".into()));
    }
    let pot = cfg.build_potential()?;
    report.push(moment_gate(&pot));
    let data = timed(&mut report, "direct", || build_scattering_data(&pot, &cfg.grid))?;
    report.extend(necessary_conditions(&data, &pot.minus, &pot.plus, cfg.tolerance)?);
    let slices = timed(&mut report, "kdv", || kdv_slices(&pot, &data, times, &cfg.kdv))?;
    let initial = data.eigenvalues();
    for s in &slices {
        let tag = time_label(s.t);
        for c in &s.checks {
            report.push(Check { name: format!("{}@{tag}", c.name), ..c.clone() });
        }
        report.push(Check::below(format!("isospectrality@{tag}"), isospectrality(s, &initial, cfg.grid.bound_samples)?, 1e-5));
    }
    let spacing: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    if times.len() == 5 && spacing.iter().all(|d| (d - spacing[0]).abs() < 1e-12 && *d > 0.0) {
        let u: Vec<Vec<f64>> = slices.iter().map(|s| s.u.clone()).collect();
        let r = kdv_residual(&slices[0].x, times, &u)?;
        report.push(Check::below("kdv_residual", r.residual, 10.0 * r.truncation).with_note("bound: 10x stencil truncation estimate"));
    }
    if cfg.self_convergence {
        let [c, _, f] = levels(cfg);
        // the region where time 0 claims accuracy, not the widened window
        let base = slice_quantities(&slices, central_window(pot.window, cfg.glm.central));
        let run = |lv: Level, report: &mut Report, label: &str| -> Result<Vec<Quantity>> {
            let d = timed(report, &format!("direct_{label}"), || build_scattering_data(&pot, &lv.grid))?;
            let kc = KdvConfig { glm: lv.glm, ..cfg.kdv };
            timed(report, &format!("kdv_{label}"), || sampled_slices(&pot, &d, &base, times, &kc))
        };
        let coarse = run(c, &mut report, "coarse")?;
        let fine = run(f, &mut report, "fine")?;
        add_convergence(&mut report, &coarse, base, &fine, RECONSTRUCTION_FLOOR);
    }
    if let Some(out) = out {
        let (mut tc, mut xc, mut uc) = (Vec::new(), Vec::new(), Vec::new());
        for s in &slices {
            tc.extend(std::iter::repeat_n(s.t, s.x.len()));
            xc.extend_from_slice(&s.x);
            uc.extend_from_slice(&s.u);
        }
        write_columns(out, &["t", "x", "u"], &[&tc, &xc, &uc])?;
        report.outputs.push(out.display().to_string());
    }
    Ok(report)
}
