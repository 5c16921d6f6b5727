use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use twinmorse_ffi::*;

fn cstrs(xs: &[&str]) -> (Vec<CString>, Vec<*const c_char>) {
    let owned: Vec<CString> = xs.iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs = owned.iter().map(|s| s.as_ptr()).collect();
    (owned, ptrs)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tm_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn hemisphere_suite_round_trip() {
    unsafe {
        let cfg = tm_config_new();
        assert_eq!(tm_config_set_seed(cfg, 3), TmStatus::Ok);
        assert_eq!(tm_config_set_q(cfg, 2), TmStatus::Ok);
        let name = CString::new("hemispheres").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(tm_run_suite(name.as_ptr(), cfg, &mut r), TmStatus::Ok);
        assert_eq!(tm_report_failures(r), 0);
        let json = CStr::from_ptr(tm_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["suite"], "hemispheres");
        assert_eq!(v["config"]["seed"], "3");
        tm_report_free(r);
        tm_config_free(cfg);
    }
}

#[test]
fn usage_errors_carry_a_message() {
    unsafe {
        let cfg = tm_config_new();
        let bad = CString::new("-1").unwrap();
        assert_eq!(tm_config_set_radius(cfg, bad.as_ptr()), TmStatus::Usage);
        assert!(last_error().contains("radius"));
        let name = CString::new("nope").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(tm_run_suite(name.as_ptr(), cfg, &mut r), TmStatus::Usage);
        assert!(r.is_null());
        assert!(last_error().contains("unknown suite"));
        tm_config_free(cfg);
    }
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        assert_eq!(tm_config_set_seed(ptr::null_mut(), 1), TmStatus::NullPointer);
        assert_eq!(tm_run_suite(ptr::null(), ptr::null(), ptr::null_mut()), TmStatus::NullPointer);
        assert_eq!(tm_report_failures(ptr::null()), -1);
        assert!(tm_report_json(ptr::null()).is_null());
        tm_report_free(ptr::null_mut());
        tm_config_free(ptr::null_mut());
        tm_zonotope_free(ptr::null_mut());
    }
}

#[test]
fn unit_square_membership_and_distance() {
    unsafe {
        // generators (1,0) and (0,1): the unit square
        let (_g, gens) = cstrs(&["1", "0", "0", "1"]);
        let mut z = ptr::null_mut();
        assert_eq!(tm_zonotope_new(2, 2, gens.as_ptr(), &mut z), TmStatus::Ok);
        let mut inside = false;
        let (_p, p) = cstrs(&["1/2", "1"]);
        assert_eq!(tm_zonotope_contains(z, p.as_ptr(), &mut inside), TmStatus::Ok);
        assert!(inside);
        let (_o, o) = cstrs(&["3", "-1/2"]);
        assert_eq!(tm_zonotope_contains(z, o.as_ptr(), &mut inside), TmStatus::Ok);
        assert!(!inside);
        let mut need = 0usize;
        assert_eq!(tm_zonotope_distance_sq(z, o.as_ptr(), ptr::null_mut(), 0, &mut need), TmStatus::Ok);
        let mut buf = vec![0 as c_char; need];
        assert_eq!(tm_zonotope_distance_sq(z, o.as_ptr(), buf.as_mut_ptr(), need, &mut need), TmStatus::Ok);
        // (3 - 1)² + (1/2)²
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "17/4");
        let (_b, bad) = cstrs(&["x", "0"]);
        assert_eq!(tm_zonotope_contains(z, bad.as_ptr(), &mut inside), TmStatus::Usage);
        tm_zonotope_free(z);
    }
}

#[test]
fn header_declares_the_exports() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/twinmorse.h")).unwrap();
    for f in [
        "tm_last_error", "tm_config_new", "tm_config_free", "tm_config_set_type", "tm_config_set_radius",
        "tm_config_set_seed", "tm_config_set_trials", "tm_config_set_q", "tm_config_set_strict_window",
        "tm_run_suite", "tm_report_free", "tm_report_json", "tm_report_failures", "tm_zonotope_new",
        "tm_zonotope_free", "tm_zonotope_contains", "tm_zonotope_distance_sq",
    ] {
        let declared = header.contains(&format!(" {f}(")) || header.contains(&format!("*{f}("));
        assert!(declared, "{f} missing from header");
    }
    assert!(header.contains("typedef struct TmReport TmReport;"));
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let src = std::env::temp_dir().join("twinmorse_header_check.c");
    std::fs::write(&src, "#include \"twinmorse.h\"\nint main(void) { TmStatus s = TM_STATUS_OK; return (int)s; }\n").unwrap();
    let out = Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg("-I").arg(dir.join("include")).arg(&src).output();
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => panic!("no C compiler to check the header: {e}"),
    }
}
