//! C ABI over `twinmorse`.
//!
//! Everything crosses the boundary as opaque handles, integer status codes and
//! NUL-terminated UTF-8. Rationals are passed as strings such as `"5/2"`.
//! Each `*_new` has a matching `*_free`; strings returned by the library are
//! owned by the handle they came from and stay valid until it is freed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use twinmorse::exactgeom::{parse_q, RationalVector, Q};
use twinmorse::suites::{run_suite, SuiteConfig, SuiteError, SuiteReport};
use twinmorse::zonotope::Zonotope;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad configuration or argument, the analogue of CLI exit code 2.
    Usage = 3,
    /// The library reported a mathematical precondition failure.
    Compute = 4,
    Panic = 5,
}

/// Suite options. Unset fields take the suite defaults.
pub struct TmConfig {
    inner: SuiteConfig,
}

/// A finished suite run together with its canonical JSON text.
pub struct TmReport {
    report: SuiteReport,
    json: CString,
}

/// A zonotope with rational generators.
pub struct TmZonotope {
    inner: Zonotope,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn fail(code: TmStatus, msg: impl Into<String>) -> TmStatus {
    set_error(msg);
    code
}

/// Runs `f`, turning a panic into [`TmStatus::Panic`].
fn guard(f: impl FnOnce() -> TmStatus) -> TmStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TmStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, TmStatus> {
    if p.is_null() {
        return Err(fail(TmStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TmStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn rationals(p: *const *const c_char, n: usize) -> Result<Vec<Q>, TmStatus> {
    if p.is_null() && n > 0 {
        return Err(fail(TmStatus::NullPointer, "null array"));
    }
    (0..n)
        .map(|i| {
            let s = text(*p.add(i))?;
            parse_q(s).ok_or_else(|| fail(TmStatus::Usage, format!("not a rational: `{s}`")))
        })
        .collect()
}

/// Message for the last failed call on this thread. Never null; empty if nothing failed yet.
#[no_mangle]
pub extern "C" fn tm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn tm_config_new() -> *mut TmConfig {
    Box::into_raw(Box::new(TmConfig { inner: SuiteConfig::default() }))
}

/// # Safety
/// `cfg` must come from [`tm_config_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_config_free(cfg: *mut TmConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Affine type such as `"A2"`, or a product such as `"A1xA2"` for horolinks.
///
/// # Safety
/// `cfg` must be a live handle and `kind` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_type(cfg: *mut TmConfig, kind: *const c_char) -> TmStatus {
    guard(|| {
        let Some(c) = cfg.as_mut() else { return fail(TmStatus::NullPointer, "null config") };
        match text(kind) {
            Ok(s) => {
                c.inner.kind = Some(s.to_string());
                TmStatus::Ok
            }
            Err(e) => e,
        }
    })
}

/// Window radius as a positive rational string.
///
/// # Safety
/// `cfg` must be a live handle and `radius` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_radius(cfg: *mut TmConfig, radius: *const c_char) -> TmStatus {
    guard(|| {
        let Some(c) = cfg.as_mut() else { return fail(TmStatus::NullPointer, "null config") };
        let s = match text(radius) {
            Ok(s) => s,
            Err(e) => return e,
        };
        match parse_q(s) {
            Some(r) if r > Q::from_integer(0.into()) => {
                c.inner.radius = Some(r);
                TmStatus::Ok
            }
            _ => fail(TmStatus::Usage, format!("radius must be a positive rational, got `{s}`")),
        }
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_seed(cfg: *mut TmConfig, seed: u64) -> TmStatus {
    match cfg.as_mut() {
        Some(c) => {
            c.inner.seed = seed;
            TmStatus::Ok
        }
        None => fail(TmStatus::NullPointer, "null config"),
    }
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_trials(cfg: *mut TmConfig, trials: usize) -> TmStatus {
    match cfg.as_mut() {
        Some(c) => {
            c.inner.trials = Some(trials);
            TmStatus::Ok
        }
        None => fail(TmStatus::NullPointer, "null config"),
    }
}

/// Field size for the flag buildings of the hemisphere suite.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_q(cfg: *mut TmConfig, q: u32) -> TmStatus {
    match cfg.as_mut() {
        Some(c) => {
            c.inner.q = Some(q);
            TmStatus::Ok
        }
        None => fail(TmStatus::NullPointer, "null config"),
    }
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_config_set_strict_window(cfg: *mut TmConfig, strict: bool) -> TmStatus {
    match cfg.as_mut() {
        Some(c) => {
            c.inner.strict_window = strict;
            TmStatus::Ok
        }
        None => fail(TmStatus::NullPointer, "null config"),
    }
}

/// Runs a suite. On success `*out` receives a report handle to be released with [`tm_report_free`].
///
/// # Safety
/// `suite` must be a NUL-terminated string, `cfg` null or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tm_run_suite(suite: *const c_char, cfg: *const TmConfig, out: *mut *mut TmReport) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let name = match text(suite) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let default = SuiteConfig::default();
        let c = cfg.as_ref().map_or(&default, |c| &c.inner);
        match run_suite(name, c) {
            Ok(report) => {
                let json = CString::new(report.to_json_string()).expect("report JSON has no NUL");
                *out = Box::into_raw(Box::new(TmReport { report, json }));
                TmStatus::Ok
            }
            Err(SuiteError::Usage(e)) => fail(TmStatus::Usage, e),
            Err(SuiteError::Compute(e)) => fail(TmStatus::Compute, e.to_string()),
        }
    })
}

/// # Safety
/// `r` must come from [`tm_run_suite`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_report_free(r: *mut TmReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Canonical JSON of the report, owned by the handle. Null for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_report_json(r: *const TmReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Number of failing cases, or -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_report_failures(r: *const TmReport) -> i64 {
    r.as_ref().map_or(-1, |r| r.report.failures() as i64)
}

/// Builds `Z(D)` in dimension `dim` from `n_gens` generators given row by row as
/// `n_gens * dim` rational strings.
///
/// # Safety
/// `coords` must point to `n_gens * dim` NUL-terminated strings, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_zonotope_new(dim: usize, n_gens: usize, coords: *const *const c_char, out: *mut *mut TmZonotope) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let Some(len) = dim.checked_mul(n_gens) else { return fail(TmStatus::Usage, "size overflow") };
        let xs = match rationals(coords, len) {
            Ok(v) => v,
            Err(e) => return e,
        };
        let gens = if dim == 0 { vec![] } else { xs.chunks(dim).map(|c| RationalVector::new(c.to_vec())).collect() };
        match Zonotope::new(dim, gens) {
            Ok(z) => {
                *out = Box::into_raw(Box::new(TmZonotope { inner: z }));
                TmStatus::Ok
            }
            Err(e) => fail(TmStatus::Compute, e.to_string()),
        }
    })
}

/// # Safety
/// `z` must come from [`tm_zonotope_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_zonotope_free(z: *mut TmZonotope) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}

/// Membership test for a point of `dim` rational strings. `*inside` is set on success.
///
/// # Safety
/// `z` must be a live handle, `point` must hold `dim` strings, `inside` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_zonotope_contains(z: *const TmZonotope, point: *const *const c_char, inside: *mut bool) -> TmStatus {
    guard(|| {
        let Some(z) = z.as_ref() else { return fail(TmStatus::NullPointer, "null zonotope") };
        if inside.is_null() {
            return fail(TmStatus::NullPointer, "null output pointer");
        }
        let x = match rationals(point, z.inner.dim()) {
            Ok(v) => RationalVector::new(v),
            Err(e) => return e,
        };
        *inside = z.inner.contains(&x);
        TmStatus::Ok
    })
}

/// Squared distance from a point to the zonotope, written as a rational string into `buf`.
/// With `buf` too small (or null) nothing is written and `*needed` gets the size including the NUL.
///
/// # Safety
/// `z` must be a live handle, `point` must hold `dim` strings, `buf` must have `cap` bytes, `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_zonotope_distance_sq(
    z: *const TmZonotope,
    point: *const *const c_char,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> TmStatus {
    guard(|| {
        let Some(z) = z.as_ref() else { return fail(TmStatus::NullPointer, "null zonotope") };
        if needed.is_null() {
            return fail(TmStatus::NullPointer, "null size pointer");
        }
        let x = match rationals(point, z.inner.dim()) {
            Ok(v) => RationalVector::new(v),
            Err(e) => return e,
        };
        let s = twinmorse::exactgeom::qstr(&z.inner.distance_sq(&x));
        *needed = s.len() + 1;
        if !buf.is_null() && cap >= s.len() + 1 {
            ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, s.len());
            *buf.add(s.len()) = 0;
        }
        TmStatus::Ok
    })
}
