//! Named pass/fail checks with measured values and tolerances.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

impl Check {
    /// Passes when `measured < tolerance` (and is not NaN).
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, tolerance, pass: measured < tolerance, note: String::new() }
    }

    /// Passes when `measured > bound` (and is not NaN).
    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, tolerance: bound, pass: measured > bound, note: "lower bound".into() }
    }

    /// A diagnostic that is recorded but never fails.
    pub fn info(name: impl Into<String>, measured: f64) -> Self {
        Self { name: name.into(), measured, tolerance: f64::INFINITY, pass: true, note: "diagnostic".into() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {} measured={:.3e} tol={:.1e}", self.name, self.measured, self.tolerance)?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// Ordered collection of checks; a name appears at most once.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the configuration text the run was started from.
    pub config_digest: String,
    pub checks: Vec<Check>,
    pub quantities: Vec<Quantity>,
    pub outputs: Vec<String>,
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    /// Adds a check, replacing an earlier one with the same name.
    pub fn push(&mut self, check: Check) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == check.name) {
            *c = check;
        } else {
            self.checks.push(check);
        }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A reported result, sampled at `x` (empty for a scalar), with a
/// discretization-error estimate per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

fn lookup(xs: &[f64], vals: &[f64], x: Option<f64>) -> Option<f64> {
    match x {
        None => vals.first().copied(),
        Some(x) => xs.iter().position(|&t| (t - x).abs() <= 1e-9 * (1.0 + x.abs())).map(|i| vals[i]),
    }
}

impl Quantity {
    /// Values at the base resolution. A sampled quantity carries one error
    /// estimate, the largest change from the coarse resolution `coarse` over
    /// shared samples, never below `floor·(1 + max|value|)`.
    pub fn estimated(name: impl Into<String>, x: Vec<f64>, values: Vec<f64>, coarse: (&[f64], &[f64]), floor: f64) -> Self {
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut change = 0.0f64;
        for (i, &v) in values.iter().enumerate() {
            let at = if x.is_empty() { None } else { Some(x[i]) };
            if let Some(c) = lookup(coarse.0, coarse.1, at) {
                change = if (v - c).is_nan() { f64::NAN } else { change.max((v - c).abs()) };
            }
        }
        let err = change.max(floor * (1.0 + scale));
        let err = if change.is_nan() || floor.is_nan() { f64::NAN } else { err };
        Self { name: name.into(), errors: vec![err; values.len()], x, values }
    }

    /// Largest `|change| / error` against the same quantity at a finer
    /// resolution, over the samples the two share.
    pub fn convergence_ratio(&self, finer: &Quantity) -> f64 {
        let mut worst = 0.0f64;
        let mut shared = 0;
        for i in 0..self.values.len() {
            let at = if self.x.is_empty() { None } else { Some(self.x[i]) };
            if let Some(f) = lookup(&finer.x, &finer.values, at) {
                shared += 1;
                let r = (f - self.values[i]).abs() / self.errors[i];
                worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
            }
        }
        if shared == 0 {
            f64::INFINITY
        } else {
            worst
        }
    }
}

/// One `self_convergence_<name>` check per base quantity: the change under
/// doubled resolution must stay below the reported error estimate.
pub fn self_convergence(base: &[Quantity], finer: &[Quantity]) -> Vec<Check> {
    base.iter()
        .map(|q| {
            let ratio = finer.iter().find(|f| f.name == q.name).map_or(f64::INFINITY, |f| q.convergence_ratio(f));
            Check::below(format!("self_convergence_{}", q.name), ratio, 1.0).with_note("change under doubling / error estimate")
        })
        .collect()
}
