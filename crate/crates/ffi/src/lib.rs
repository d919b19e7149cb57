//! C interface to `scatter-core`.
//!
//! Objects are opaque handles created by `*_load`, `*_parse` or a solver and
//! released with the matching `*_free`. Every fallible call returns a
//! [`ScatterStatus`]; on failure [`scatter_last_error`] describes the error
//! until the next failing call on the same thread. Panics are caught at the
//! boundary and reported as `SCATTER_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::ptr;

use scatter_core::background::{Background, Side};
use scatter_core::direct::{build_scattering_data, necessary_conditions, ScatteringData};
use scatter_core::glm::{reconstruct_potential, ReconstructionReport};
use scatter_core::io::{load_data, save_data, RunConfig};
use scatter_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScatterStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    Config = 3,
    Parse = 4,
    Io = 5,
    InvalidInput = 6,
    /// The computation failed or could not be resolved.
    Numerical = 7,
    /// An output buffer is smaller than required.
    BufferTooSmall = 8,
    Panic = 9,
}

/// Run configuration.
pub struct ScatterConfig(RunConfig);

/// Scattering data together with its two backgrounds.
pub struct ScatterData {
    data: ScatteringData,
    minus: Background,
    plus: Background,
}

/// Potentials reconstructed from both sides on a common grid.
pub struct ScatterReconstruction(ReconstructionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ScatterStatus {
    match e {
        Error::Config(_) => ScatterStatus::Config,
        Error::Parse(_) => ScatterStatus::Parse,
        Error::Io(_) => ScatterStatus::Io,
        Error::InvalidInput(_) => ScatterStatus::InvalidInput,
        _ => ScatterStatus::Numerical,
    }
}

struct Fail(ScatterStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Out<T> = std::result::Result<T, Fail>;

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Out<()>) -> ScatterStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScatterStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned()).unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            ScatterStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(ScatterStatus::NullPointer, format!("{what} is null"))
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Out<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(ScatterStatus::Utf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Out<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Out<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn scatter_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn scatter_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses configuration text. Relative file names resolve against
/// `base_dir`, or the working directory when it is null.
///
/// # Safety
/// `config_text` and a non-null `base_dir` must be NUL-terminated strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_config_parse(config_text: *const c_char, base_dir: *const c_char, out: *mut *mut ScatterConfig) -> ScatterStatus {
    guard(|| {
        let t = utf8(config_text, "config_text")?;
        let base = if base_dir.is_null() { PathBuf::from(".") } else { PathBuf::from(utf8(base_dir, "base_dir")?) };
        emit(out, ScatterConfig(RunConfig::parse(t, &base)?))
    })
}

/// Loads a configuration file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_config_load(path: *const c_char, out: *mut *mut ScatterConfig) -> ScatterStatus {
    guard(|| emit(out, ScatterConfig(RunConfig::load(Path::new(utf8(path, "path")?))?)))
}

/// # Safety
/// `cfg` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scatter_config_free(cfg: *mut ScatterConfig) {
    free(cfg)
}

/// Solves the direct problem for the configured potential.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_direct(cfg: *const ScatterConfig, out: *mut *mut ScatterData) -> ScatterStatus {
    guard(|| {
        let cfg = &handle(cfg, "cfg")?.0;
        let pot = cfg.build_potential()?;
        let data = build_scattering_data(&pot, &cfg.grid)?;
        emit(out, ScatterData { data, minus: pot.minus, plus: pot.plus })
    })
}

/// Reads a scattering-data JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_load(path: *const c_char, out: *mut *mut ScatterData) -> ScatterStatus {
    guard(|| {
        let (data, minus, plus) = load_data(Path::new(utf8(path, "path")?))?;
        emit(out, ScatterData { data, minus, plus })
    })
}

/// Writes scattering data as canonical JSON.
///
/// # Safety
/// `data` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_save(data: *const ScatterData, path: *const c_char) -> ScatterStatus {
    guard(|| {
        let d = handle(data, "data")?;
        Ok(save_data(Path::new(utf8(path, "path")?), &d.data, &d.minus, &d.plus)?)
    })
}

/// # Safety
/// `data` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_free(data: *mut ScatterData) {
    free(data)
}

/// Number of eigenvalues; 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_eigenvalue_count(data: *const ScatterData) -> usize {
    data.as_ref().map_or(0, |d| d.data.bound.len())
}

/// Eigenvalue `k` (ascending) and its norming constants. Null outputs are skipped.
///
/// # Safety
/// `data` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_bound_state(data: *const ScatterData, k: usize, lambda: *mut f64, gamma_plus: *mut f64, gamma_minus: *mut f64) -> ScatterStatus {
    guard(|| {
        let d = handle(data, "data")?;
        let b = d.data.bound.get(k).ok_or_else(|| Fail(ScatterStatus::InvalidInput, format!("no eigenvalue {k}")))?;
        for (p, v) in [(lambda, b.lambda), (gamma_plus, b.gamma_plus), (gamma_minus, b.gamma_minus)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Evaluates the necessary conditions on the data at tolerance `tol` and
/// stores the number of violated ones in `failed`.
///
/// # Safety
/// `data` must be a live handle; `failed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_data_check(data: *const ScatterData, tol: f64, failed: *mut usize) -> ScatterStatus {
    guard(|| {
        let d = handle(data, "data")?;
        if failed.is_null() {
            return Err(null("failed"));
        }
        let checks = necessary_conditions(&d.data, &d.minus, &d.plus, tol)?;
        *failed = checks.iter().filter(|c| !c.pass).count();
        Ok(())
    })
}

/// Reconstructs the potential from both sides over the configured window.
///
/// # Safety
/// `data` and `cfg` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scatter_inverse(data: *const ScatterData, cfg: *const ScatterConfig, out: *mut *mut ScatterReconstruction) -> ScatterStatus {
    guard(|| {
        let d = handle(data, "data")?;
        let cfg = &handle(cfg, "cfg")?.0;
        let window = cfg.window.ok_or_else(|| Fail(ScatterStatus::Config, "[potential] window is required for the inverse problem".into()))?;
        let rec = reconstruct_potential(&d.data, &d.minus, &d.plus, window, &cfg.glm, &[Side::Plus, Side::Minus], None)?;
        emit(out, ScatterReconstruction(rec))
    })
}

/// Number of grid points; 0 for a null handle.
///
/// # Safety
/// `rec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scatter_reconstruction_len(rec: *const ScatterReconstruction) -> usize {
    rec.as_ref().map_or(0, |r| r.0.x.len())
}

/// Copies the grid and both reconstructions into buffers of `capacity`
/// doubles each. Null buffers are skipped.
///
/// # Safety
/// `rec` must be a live handle; non-null buffers must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn scatter_reconstruction_copy(rec: *const ScatterReconstruction, x: *mut f64, q_plus: *mut f64, q_minus: *mut f64, capacity: usize) -> ScatterStatus {
    guard(|| {
        let r = &handle(rec, "rec")?.0;
        let n = r.x.len();
        if capacity < n {
            return Err(Fail(ScatterStatus::BufferTooSmall, format!("{n} points do not fit in {capacity}")));
        }
        for (buf, src) in [(x, Some(&r.x)), (q_plus, r.q(Side::Plus)), (q_minus, r.q(Side::Minus))] {
            if let (false, Some(src)) = (buf.is_null(), src) {
                ptr::copy_nonoverlapping(src.as_ptr(), buf, n);
            }
        }
        Ok(())
    })
}

/// Largest difference between the two reconstructions; NaN for a null handle.
///
/// # Safety
/// `rec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scatter_reconstruction_discrepancy(rec: *const ScatterReconstruction) -> f64 {
    rec.as_ref().and_then(|r| r.0.discrepancy).unwrap_or(f64::NAN)
}

/// Number of failed checks of the inverse solve; 0 for a null handle.
///
/// # Safety
/// `rec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scatter_reconstruction_failed_checks(rec: *const ScatterReconstruction) -> usize {
    rec.as_ref().map_or(0, |r| r.0.checks.iter().filter(|c| !c.pass).count())
}

/// # Safety
/// `rec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scatter_reconstruction_free(rec: *mut ScatterReconstruction) {
    free(rec)
}
