//! Run configuration: flat INI sections with `key = value` lines.
//!
//! ```ini
//! # kind: constant | lame | samples
//! [background.minus]
//! kind = constant
//! level = 0
//!
//! [background.plus]
//! kind = lame
//! m = 0.5
//!
//! [potential]
//! window = -8, 8
//! blend = logistic
//! width = 0.5
//! terms = sech2 -2 0 1, gaussian 0.5 0 1
//!
//! [kdv]
//! times = 0, 0.05, 0.1
//! ```
//!
//! Comments take whole lines. Relative file paths are resolved against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ini::Ini;
use sha2::{Digest, Sha256};

use crate::background::{Background, FourierProfile, Side};
use crate::direct::GridConfig;
use crate::error::{Error, Result};
use crate::glm::GlmConfig;
use crate::kdv::KdvConfig;
use crate::potential::{Blend, CubicSpline, Potential, Shape, Term};
use crate::transform::TransformConfig;

use super::table::read_columns;

#[derive(Clone, Debug, PartialEq)]
pub enum BackgroundSpec {
    Constant(f64),
    /// Lamé one-gap background with parameter `m`.
    Lame(f64),
    /// Equispaced samples of one period, column `p` of a CSV file.
    Samples {
        file: PathBuf,
        period: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSpec {
    Analytic {
        blend: Blend,
        terms: Vec<Term>,
    },
    /// Columns `x` and `q` of a CSV file.
    Samples(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// The text the configuration was parsed from.
    pub source: String,
    pub name: String,
    pub minus: BackgroundSpec,
    pub plus: BackgroundSpec,
    pub potential: PotentialSpec,
    /// Taken from the samples when absent and the potential is sampled.
    pub window: Option<(f64, f64)>,
    pub grid: GridConfig,
    pub glm: GlmConfig,
    pub transform: TransformConfig,
    pub kdv: KdvConfig,
    pub times: Vec<f64>,
    /// Tolerance for the necessary conditions on scattering data.
    pub tolerance: f64,
    /// Whether to rerun with doubled grids and compare.
    pub self_convergence: bool,
}

const KEYS: &[(&str, &[&str])] = &[
    ("background.minus", &["kind", "level", "m", "file", "period"]),
    ("background.plus", &["kind", "level", "m", "file", "period"]),
    ("potential", &["name", "window", "blend", "width", "terms", "file"]),
    ("grid", &["nodes_per_band", "nodes_per_unit", "cutoff", "bound_samples"]),
    ("glm", &["panel", "order", "step", "central"]),
    ("transform", &["step"]),
    ("kdv", &["times", "margin"]),
    ("checks", &["tolerance", "self_convergence"]),
];

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_f64(sec: &str, key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| cfg_err(format!("[{sec}] {key}: \"{v}\" is not a number")))
}

fn parse_list(sec: &str, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_f64(sec, key, s)).collect()
}

struct Reader<'a> {
    sections: &'a Sections,
}

impl Reader<'_> {
    fn raw(&self, sec: &str, key: &str) -> Option<&str> {
        self.sections.get(sec).and_then(|s| s.get(key)).map(String::as_str)
    }

    fn f64_or(&self, sec: &str, key: &str, default: f64) -> Result<f64> {
        self.raw(sec, key).map_or(Ok(default), |v| parse_f64(sec, key, v))
    }

    fn usize_or(&self, sec: &str, key: &str, default: usize) -> Result<usize> {
        self.raw(sec, key).map_or(Ok(default), |v| v.trim().parse().map_err(|_| cfg_err(format!("[{sec}] {key}: \"{v}\" is not a count"))))
    }

    fn bool_or(&self, sec: &str, key: &str, default: bool) -> Result<bool> {
        match self.raw(sec, key).map(str::trim) {
            None => Ok(default),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(cfg_err(format!("[{sec}] {key}: \"{v}\" is not a boolean"))),
        }
    }

    fn required(&self, sec: &str, key: &str) -> Result<&str> {
        self.raw(sec, key).ok_or_else(|| cfg_err(format!("[{sec}] {key} is required")))
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p.trim());
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn background_spec(r: &Reader, sec: &str, base: &Path) -> Result<BackgroundSpec> {
    match r.raw(sec, "kind").map(str::trim).unwrap_or("constant") {
        "constant" => Ok(BackgroundSpec::Constant(r.f64_or(sec, "level", 0.0)?)),
        "lame" => Ok(BackgroundSpec::Lame(parse_f64(sec, "m", r.required(sec, "m")?)?)),
        "samples" => Ok(BackgroundSpec::Samples { file: resolve(base, r.required(sec, "file")?), period: parse_f64(sec, "period", r.required(sec, "period")?)? }),
        k => Err(cfg_err(format!("[{sec}] kind: unknown background kind \"{k}\""))),
    }
}

fn parse_terms(v: &str) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(cfg_err(format!("[potential] terms: \"{item}\" must read \"kind amplitude center width\"")));
        }
        let nums: Vec<f64> = parts[1..].iter().map(|s| parse_f64("potential", "terms", s)).collect::<Result<_>>()?;
        let (amplitude, center, width) = (nums[0], nums[1], nums[2]);
        if !(width > 0.0) {
            return Err(cfg_err(format!("[potential] terms: width must be positive in \"{item}\"")));
        }
        out.push(match parts[0] {
            "sech2" => Term::Sech2 { amplitude, center, width },
            "gaussian" => Term::Gaussian { amplitude, center, width },
            k => return Err(cfg_err(format!("[potential] terms: unknown term \"{k}\""))),
        });
    }
    Ok(out)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str_noescape(text).map_err(|e| cfg_err(e.to_string()))?;
        let mut sections = Sections::new();
        for (sec, props) in ini.iter() {
            let Some(sec) = sec else {
                if props.iter().next().is_some() {
                    return Err(cfg_err("keys before the first section"));
                }
                continue;
            };
            let allowed = KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).ok_or_else(|| cfg_err(format!("unknown section [{sec}]")))?;
            let entry = sections.entry(sec.to_string()).or_default();
            for (k, v) in props.iter() {
                if !allowed.contains(&k) {
                    return Err(cfg_err(format!("[{sec}] unknown key \"{k}\"")));
                }
                entry.insert(k.to_string(), v.to_string());
            }
        }
        let r = Reader { sections: &sections };
        let potential = match r.raw("potential", "file") {
            Some(f) => PotentialSpec::Samples(resolve(base, f)),
            None => {
                let blend = match r.raw("potential", "blend").map(str::trim).unwrap_or("sharp") {
                    "sharp" => Blend::Sharp,
                    "logistic" => Blend::Logistic { width: r.f64_or("potential", "width", 0.5)? },
                    b => return Err(cfg_err(format!("[potential] blend: unknown blend \"{b}\""))),
                };
                PotentialSpec::Analytic { blend, terms: parse_terms(r.raw("potential", "terms").unwrap_or(""))? }
            }
        };
        let window = match r.raw("potential", "window") {
            Some(v) => match parse_list("potential", "window", v)?.as_slice() {
                [w] => Some((-w.abs(), w.abs())),
                [a, b] => Some((*a, *b)),
                _ => return Err(cfg_err("[potential] window: give a half-width or \"a, b\"")),
            },
            None => None,
        };
        if window.is_none() && matches!(potential, PotentialSpec::Analytic { .. }) {
            return Err(cfg_err("[potential] window is required for an analytic potential"));
        }
        let g = GridConfig::default();
        let grid = GridConfig {
            nodes_per_band: r.usize_or("grid", "nodes_per_band", g.nodes_per_band)?,
            nodes_per_unit: r.usize_or("grid", "nodes_per_unit", g.nodes_per_unit)?,
            cutoff: r.f64_or("grid", "cutoff", g.cutoff)?,
            bound_samples: r.usize_or("grid", "bound_samples", g.bound_samples)?,
        };
        let mut glm = GlmConfig::default();
        glm.nystrom.panel = r.f64_or("glm", "panel", glm.nystrom.panel)?;
        glm.nystrom.order = r.usize_or("glm", "order", glm.nystrom.order)?;
        glm.step = r.f64_or("glm", "step", glm.step)?;
        glm.central = r.f64_or("glm", "central", glm.central)?;
        let transform = TransformConfig { step: r.f64_or("transform", "step", TransformConfig::default().step)? };
        let tolerance = r.f64_or("checks", "tolerance", 1e-6)?;
        let kdv = KdvConfig { glm, margin: r.f64_or("kdv", "margin", KdvConfig::default().margin)?, tol: tolerance };
        let times = match r.raw("kdv", "times") {
            Some(v) => parse_list("kdv", "times", v)?,
            None => vec![],
        };
        let positive = [grid.cutoff, glm.nystrom.panel, glm.step, transform.step, tolerance];
        if positive.iter().any(|v| !(*v > 0.0)) || !(glm.central > 0.0 && glm.central <= 1.0) || glm.nystrom.order == 0 {
            return Err(cfg_err("grid, step and tolerance settings must be positive, and glm.central must lie in (0, 1]"));
        }
        Ok(Self {
            source: text.to_string(),
            name: r.raw("potential", "name").unwrap_or("potential").trim().to_string(),
            minus: background_spec(&r, "background.minus", base)?,
            plus: background_spec(&r, "background.plus", base)?,
            potential,
            window,
            grid,
            glm,
            transform,
            kdv,
            times,
            tolerance,
            self_convergence: r.bool_or("checks", "self_convergence", true)?,
        })
    }

    /// Hex SHA-256 of the configuration text.
    pub fn digest(&self) -> String {
        format!("{:x}", Sha256::digest(self.source.as_bytes()))
    }

    pub fn background(&self, side: Side) -> Result<Background> {
        let spec = if side == Side::Plus { &self.plus } else { &self.minus };
        match spec {
            BackgroundSpec::Constant(c) => Background::constant(side, *c),
            BackgroundSpec::Lame(m) => Background::lame(side, *m),
            BackgroundSpec::Samples { file, period } => {
                let (headers, cols) = read_columns(file)?;
                let j = headers.iter().position(|h| h == "p").ok_or_else(|| cfg_err(format!("{}: no column \"p\"", file.display())))?;
                let p = FourierProfile::from_samples(&cols[j], *period)?;
                let lo = cols[j].iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = cols[j].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Background::periodic(side, p, (lo - 1.0, hi + 12.0), 800)
            }
        }
    }

    pub fn build_potential(&self) -> Result<Potential> {
        let (minus, plus) = (self.background(Side::Minus)?, self.background(Side::Plus)?);
        match &self.potential {
            PotentialSpec::Analytic { blend, terms } => {
                Potential::new(&self.name, minus, plus, self.window.unwrap(), Shape::Analytic { blend: blend.clone(), terms: terms.clone() })
            }
            PotentialSpec::Samples(file) => {
                let (headers, cols) = read_columns(file)?;
                let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| cfg_err(format!("{}: no column \"{name}\"", file.display())));
                let (x, q) = (cols[col("x")?].clone(), cols[col("q")?].clone());
                let window = self.window.unwrap_or((x[0], *x.last().unwrap_or(&0.0)));
                Potential::new(&self.name, minus, plus, window, Shape::Sampled(CubicSpline::new(x, q)?))
            }
        }
    }
}
