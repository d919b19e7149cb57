use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use scatter_ffi::*;

const SECH2: &str = "[potential]\nwindow = 8\nterms = sech2 -2 0 1\n[glm]\nstep = 0.1\n";

fn last_error() -> String {
    let p = scatter_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn config(text: &str) -> *mut ScatterConfig {
    let t = CString::new(text).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { scatter_config_parse(t.as_ptr(), ptr::null(), &mut cfg) }, ScatterStatus::Ok);
    cfg
}

#[test]
fn direct_inverse_round_trip() {
    unsafe {
        let cfg = config(SECH2);
        let mut data = ptr::null_mut();
        assert_eq!(scatter_direct(cfg, &mut data), ScatterStatus::Ok);
        assert_eq!(scatter_data_eigenvalue_count(data), 1);
        let (mut l, mut gp) = (0.0, 0.0);
        assert_eq!(scatter_data_bound_state(data, 0, &mut l, &mut gp, ptr::null_mut()), ScatterStatus::Ok);
        assert!((l + 1.0).abs() < 1e-6, "{l}");
        assert!((gp * gp - 2.0).abs() < 1e-4, "{gp}");
        assert_eq!(scatter_data_bound_state(data, 1, &mut l, ptr::null_mut(), ptr::null_mut()), ScatterStatus::InvalidInput);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("d.json").to_str().unwrap()).unwrap();
        assert_eq!(scatter_data_save(data, path.as_ptr()), ScatterStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(scatter_data_load(path.as_ptr(), &mut loaded), ScatterStatus::Ok);
        let mut failed = usize::MAX;
        assert_eq!(scatter_data_check(loaded, 1e-6, &mut failed), ScatterStatus::Ok);
        assert_eq!(failed, 0);

        let mut rec = ptr::null_mut();
        assert_eq!(scatter_inverse(loaded, cfg, &mut rec), ScatterStatus::Ok);
        let n = scatter_reconstruction_len(rec);
        assert!(n > 10);
        let (mut x, mut qp) = (vec![0.0; n], vec![0.0; n]);
        assert_eq!(scatter_reconstruction_copy(rec, x.as_mut_ptr(), qp.as_mut_ptr(), ptr::null_mut(), n - 1), ScatterStatus::BufferTooSmall);
        assert_eq!(scatter_reconstruction_copy(rec, x.as_mut_ptr(), qp.as_mut_ptr(), ptr::null_mut(), n), ScatterStatus::Ok);
        let err = x.iter().zip(&qp).map(|(x, q)| (q + 2.0 / x.cosh().powi(2)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
        assert!(scatter_reconstruction_discrepancy(rec) < 1e-3);
        assert_eq!(scatter_reconstruction_failed_checks(rec), 0);

        scatter_reconstruction_free(rec);
        scatter_data_free(loaded);
        scatter_data_free(data);
        scatter_config_free(cfg);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let bad = CString::new("[nonsense]\n").unwrap();
        assert_eq!(scatter_config_parse(bad.as_ptr(), ptr::null(), &mut cfg), ScatterStatus::Config);
        assert!(last_error().contains("nonsense"));
        assert!(cfg.is_null());
        assert_eq!(scatter_config_parse(ptr::null(), ptr::null(), &mut cfg), ScatterStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(scatter_config_parse(invalid.as_ptr().cast(), ptr::null(), &mut cfg), ScatterStatus::Utf8);

        let mut data = ptr::null_mut();
        let missing = CString::new("/nonexistent/d.json").unwrap();
        assert_eq!(scatter_data_load(missing.as_ptr(), &mut data), ScatterStatus::Io);
        assert_eq!(scatter_direct(ptr::null(), &mut data), ScatterStatus::NullPointer);
        assert_eq!(scatter_data_eigenvalue_count(ptr::null()), 0);
        assert!(scatter_reconstruction_discrepancy(ptr::null()).is_nan());
        scatter_data_free(ptr::null_mut());
        assert!(!CStr::from_ptr(scatter_version()).to_bytes().is_empty());
    }
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_against_header() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    if !lib_dir.join("libscatter_ffi.a").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipped: no C compiler or static library");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "scatter.h"
int main(void) {
    ScatterConfig *cfg = NULL;
    const char *text = "[potential]\nwindow = 6\nterms = sech2 -2 0 1\n";
    if (scatter_config_parse(text, NULL, &cfg) != SCATTER_STATUS_OK) return 1;
    ScatterData *data = NULL;
    if (scatter_direct(cfg, &data) != SCATTER_STATUS_OK) return 2;
    double lambda = 0;
    if (scatter_data_bound_state(data, 0, &lambda, NULL, NULL) != SCATTER_STATUS_OK) return 3;
    if (scatter_config_parse("[x]\n", NULL, &cfg) != SCATTER_STATUS_CONFIG) return 4;
    if (strlen(scatter_last_error()) == 0) return 5;
    printf("%.8f\n", lambda);
    scatter_data_free(data);
    scatter_config_free(cfg);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.path().join("smoke");
    let out =
        Command::new("cc").arg(&src).arg(format!("-I{dir}/include")).arg(lib_dir.join("libscatter_ffi.a")).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let lambda: f64 = String::from_utf8_lossy(&run.stdout).trim().parse().unwrap();
    assert!((lambda + 1.0).abs() < 1e-6, "{lambda}");
}
