//! Canonical JSON: sorted keys, compact layout, floats as `%.17g`.
//! Non-finite floats are written as `null` and read back as NaN.

use std::io;
use std::path::Path;
use std::sync::Arc;

use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

use crate::background::{Background, DirichletPoint, FourierProfile, Partition, PoleClass, Profile, Side, SpectralBand};
use crate::direct::{BandGrid, BoundState, EdgeFit, ScatteringData};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::report::Report;

/// C's `%.17g`.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let e = format!("{v:.16e}");
    let (mant, exp) = e.split_once('e').unwrap();
    let x: i32 = exp.parse().unwrap();
    if !(-4..17).contains(&x) {
        format!("{}e{}{:02}", strip_zeros(mant), if x < 0 { '-' } else { '+' }, x.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - x) as usize, v))
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

struct G17;

impl Formatter for G17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }
}

/// Serializes with sorted keys and `%.17g` floats, newline-terminated.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17);
    serde::Serialize::serialize(v, &mut ser).expect("serializing a JSON value into memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

pub fn num(x: f64) -> Value {
    // -0 would not survive a parse as an integer, so it is written as 0
    Value::from(if x == 0.0 { 0.0 } else { x })
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing key \"{key}\"")))
}

fn read_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Null => Ok(f64::NAN),
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        _ => Err(Error::Parse(format!("expected a number, got {v}"))),
    }
}

fn get_f64(v: &Value, key: &str) -> Result<f64> {
    read_f64(field(v, key)?)
}

fn get_floats(v: &Value, key: &str) -> Result<Vec<f64>> {
    field(v, key)?.as_array().ok_or_else(|| Error::Parse(format!("\"{key}\" must be an array")))?.iter().map(read_f64).collect()
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| Error::Parse(format!("\"{key}\" must be an array")))
}

fn get_bool(v: &Value, key: &str) -> Result<bool> {
    field(v, key)?.as_bool().ok_or_else(|| Error::Parse(format!("\"{key}\" must be a boolean")))
}

fn complex(re: &[f64], im: &[f64]) -> Result<Vec<C64>> {
    if re.len() != im.len() {
        return Err(Error::Parse("real and imaginary parts differ in length".into()));
    }
    Ok(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect())
}

fn parts(v: &[C64]) -> (Value, Value) {
    (floats(&v.iter().map(|c| c.re).collect::<Vec<_>>()), floats(&v.iter().map(|c| c.im).collect::<Vec<_>>()))
}

fn class_label(c: PoleClass) -> &'static str {
    match c {
        PoleClass::Weyl => "weyl",
        PoleClass::Breve => "breve",
        PoleClass::Edge => "edge",
    }
}

pub fn background_to_json(bg: &Background) -> Value {
    match &bg.profile {
        Profile::Constant(c) => json!({ "kind": "constant", "level": num(*c) }),
        Profile::Periodic(p) => json!({
            "kind": "periodic",
            "period": num(p.period),
            "mean": num(p.mean),
            "cos": floats(&p.cos),
            "sin": floats(&p.sin),
            "edges": floats(&bg.edges()),
            "dirichlet_mu": floats(&bg.dirichlet.iter().map(|d| d.mu).collect::<Vec<_>>()),
            "dirichlet_class": bg.dirichlet.iter().map(|d| class_label(d.class)).collect::<Vec<_>>(),
        }),
    }
}

/// Restores a background exactly as written, without rescanning its spectrum.
pub fn background_from_json(v: &Value, side: Side) -> Result<Background> {
    match field(v, "kind")?.as_str() {
        Some("constant") => Background::constant(side, get_f64(v, "level")?),
        Some("periodic") => {
            let profile = FourierProfile { period: get_f64(v, "period")?, mean: get_f64(v, "mean")?, cos: get_floats(v, "cos")?, sin: get_floats(v, "sin")? };
            if profile.cos.len() != profile.sin.len() || !(profile.period > 0.0) {
                return Err(Error::Parse("inconsistent periodic profile".into()));
            }
            let edges = get_floats(v, "edges")?;
            if edges.len() % 2 == 0 || edges.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::Parse("band edges must be increasing and odd in number".into()));
            }
            let mut bands: Vec<SpectralBand> = edges.chunks(2).filter(|c| c.len() == 2).map(|c| SpectralBand::finite(c[0], c[1])).collect();
            bands.push(SpectralBand::semi_infinite(*edges.last().unwrap()));
            let mus = get_floats(v, "dirichlet_mu")?;
            let classes = get_array(v, "dirichlet_class")?;
            if mus.len() != classes.len() || mus.len() + 1 != bands.len() {
                return Err(Error::Parse("one Dirichlet eigenvalue per gap expected".into()));
            }
            let dirichlet = mus
                .iter()
                .zip(classes)
                .map(|(&mu, c)| {
                    let class = match c.as_str() {
                        Some("weyl") => PoleClass::Weyl,
                        Some("breve") => PoleClass::Breve,
                        Some("edge") => PoleClass::Edge,
                        _ => return Err(Error::Parse(format!("unknown pole class {c}"))),
                    };
                    Ok(DirichletPoint { mu, class })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Background { side, profile: Profile::Periodic(Arc::new(profile)), bands, dirichlet })
        }
        _ => Err(Error::Parse("background kind must be \"constant\" or \"periodic\"".into())),
    }
}

fn piece_to_json(p: &BandGrid) -> Value {
    let (re_r, im_r) = parts(&p.r);
    let (re_t, im_t) = parts(&p.t);
    json!({
        "lo": num(p.lo), "hi": num(p.hi), "semi_infinite": p.semi_infinite, "n": p.n,
        "lambda": floats(&p.lambda), "weight": floats(&p.weight),
        "re_R": re_r, "im_R": im_r, "re_T": re_t, "im_T": im_t,
    })
}

fn piece_from_json(v: &Value) -> Result<BandGrid> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| Error::Parse("\"n\" must be a count".into()))? as usize;
    let p = BandGrid {
        lo: get_f64(v, "lo")?,
        hi: get_f64(v, "hi")?,
        semi_infinite: get_bool(v, "semi_infinite")?,
        n,
        lambda: get_floats(v, "lambda")?,
        weight: get_floats(v, "weight")?,
        r: complex(&get_floats(v, "re_R")?, &get_floats(v, "im_R")?)?,
        t: complex(&get_floats(v, "re_T")?, &get_floats(v, "im_T")?)?,
    };
    let m = p.lambda.len();
    if p.weight.len() != m || p.r.len() != m || p.t.len() != m {
        return Err(Error::Parse(format!("band piece [{}, {}] has arrays of different lengths", p.lo, p.hi)));
    }
    Ok(p)
}

fn intervals(v: &[crate::background::Interval]) -> Value {
    Value::Array(v.iter().map(|i| floats(&[i.lo, i.hi])).collect())
}

fn partition_to_json(p: &Partition) -> Value {
    json!({
        "sigma_plus": intervals(&p.sigma_plus), "sigma_minus": intervals(&p.sigma_minus),
        "sigma2": intervals(&p.sigma2), "sigma1_plus": intervals(&p.sigma1_plus),
        "sigma1_minus": intervals(&p.sigma1_minus),
        "omega1_plus": floats(&p.omega1_plus), "omega1_minus": floats(&p.omega1_minus),
        "omega2_plus": floats(&p.omega2_plus), "omega2_minus": floats(&p.omega2_minus),
        "omega3": floats(&p.omega3),
    })
}

fn edge_to_json(e: &EdgeFit) -> Value {
    json!({
        "edge": num(e.edge), "re_W": num(e.value.re), "im_W": num(e.value.im),
        "re_C": num(e.c.re), "im_C": num(e.c.im), "scale": num(e.scale),
        "virtual_level": e.virtual_level, "ambiguous": e.ambiguous,
    })
}

fn edge_from_json(v: &Value) -> Result<EdgeFit> {
    Ok(EdgeFit {
        edge: get_f64(v, "edge")?,
        value: C64::new(get_f64(v, "re_W")?, get_f64(v, "im_W")?),
        c: C64::new(get_f64(v, "re_C")?, get_f64(v, "im_C")?),
        scale: get_f64(v, "scale")?,
        virtual_level: get_bool(v, "virtual_level")?,
        ambiguous: get_bool(v, "ambiguous")?,
    })
}

/// Scattering data together with the two backgrounds it refers to.
pub fn data_to_json(data: &ScatteringData, minus: &Background, plus: &Background) -> Value {
    let bound = &data.bound;
    json!({
        "backgrounds": { "minus": background_to_json(minus), "plus": background_to_json(plus) },
        "bands_minus": data.bands_minus.iter().map(piece_to_json).collect::<Vec<_>>(),
        "bands_plus": data.bands_plus.iter().map(piece_to_json).collect::<Vec<_>>(),
        "eigenvalues": floats(&data.eigenvalues()),
        "gamma_plus": floats(&data.gamma(Side::Plus)),
        "gamma_minus": floats(&data.gamma(Side::Minus)),
        "dw": floats(&bound.iter().map(|b| b.dw).collect::<Vec<_>>()),
        "edges": data.edges.iter().map(edge_to_json).collect::<Vec<_>>(),
        "virtual_levels": floats(&data.virtual_levels().iter().map(|e| e.edge).collect::<Vec<_>>()),
        "partition": partition_to_json(&data.partition),
    })
}

/// Inverse of [`data_to_json`]; the partition is recomputed from the backgrounds.
pub fn data_from_json(v: &Value) -> Result<(ScatteringData, Background, Background)> {
    let bgs = field(v, "backgrounds")?;
    let minus = background_from_json(field(bgs, "minus")?, Side::Minus)?;
    let plus = background_from_json(field(bgs, "plus")?, Side::Plus)?;
    let bands_minus = get_array(v, "bands_minus")?.iter().map(piece_from_json).collect::<Result<Vec<_>>>()?;
    let bands_plus = get_array(v, "bands_plus")?.iter().map(piece_from_json).collect::<Result<Vec<_>>>()?;
    let (ls, gp, gm, dw) = (get_floats(v, "eigenvalues")?, get_floats(v, "gamma_plus")?, get_floats(v, "gamma_minus")?, get_floats(v, "dw")?);
    if gp.len() != ls.len() || gm.len() != ls.len() || dw.len() != ls.len() {
        return Err(Error::Parse("eigenvalue arrays differ in length".into()));
    }
    let bound = (0..ls.len()).map(|i| BoundState { lambda: ls[i], gamma_plus: gp[i], gamma_minus: gm[i], dw: dw[i] }).collect();
    let edges = get_array(v, "edges")?.iter().map(edge_from_json).collect::<Result<Vec<_>>>()?;
    let partition = Partition::new(&minus, &plus);
    Ok((ScatteringData { bands_plus, bands_minus, bound, edges, partition }, minus, plus))
}

pub fn save_data(path: &Path, data: &ScatteringData, minus: &Background, plus: &Background) -> Result<()> {
    std::fs::write(path, to_canonical_string(&data_to_json(data, minus, plus)))?;
    Ok(())
}

pub fn load_data(path: &Path) -> Result<(ScatteringData, Background, Background)> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    data_from_json(&v)
}

pub fn report_to_json(r: &Report) -> Value {
    let checks: Vec<Value> =
        r.checks.iter().map(|c| json!({ "name": c.name, "measured": num(c.measured), "tolerance": num(c.tolerance), "pass": c.pass, "note": c.note })).collect();
    let quantities: Vec<Value> = r.quantities.iter().map(|q| json!({ "name": q.name, "x": floats(&q.x), "values": floats(&q.values), "errors": floats(&q.errors) })).collect();
    let mut timings = Map::new();
    for (k, t) in &r.timings {
        timings.insert(k.clone(), num(*t));
    }
    json!({
        "command": r.command,
        "config_digest": r.config_digest,
        "all_pass": r.all_pass(),
        "checks": checks,
        "outputs": r.outputs,
        "quantities": quantities,
        "timings": timings,
    })
}
