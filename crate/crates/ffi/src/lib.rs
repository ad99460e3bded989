//! C ABI over the posdom pipeline: opaque handles, status codes, and JSON
//! strings at the boundary.
//!
//! Conventions:
//! - Every fallible call returns a [`PosdomStatus`]; out-parameters are
//!   written only on `POSDOM_STATUS_OK`.
//! - Strings returned through `char **` out-parameters are owned by the
//!   caller and must be released with [`posdom_string_free`]; handles with
//!   their matching `*_free` function.
//! - [`posdom_last_error_message`] describes the most recent failure on the
//!   calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use posdom::config::ProblemConfig;
use posdom::domain::{ApproxPositiveDomain, OutputModel, TargetRange};
use posdom::{carve, eval, pipeline, Error};

/// Outcome of a C-ABI call. Mirrors the CLI exit codes where they exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosdomStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null or not valid UTF-8.
    NullArgument = 1,
    /// A config, domain, or argument failed validation.
    Validation = 2,
    /// The external model process misbehaved.
    ModelProtocol = 3,
    /// An internal panic was caught; the library state is unspecified.
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained NUL").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(err: &Error) -> PosdomStatus {
    set_error(err.to_string());
    match err.exit_code() {
        3 => PosdomStatus::ModelProtocol,
        _ => PosdomStatus::Validation,
    }
}

fn null_arg(what: &str) -> PosdomStatus {
    set_error(format!("{what} must not be null"));
    PosdomStatus::NullArgument
}

fn guarded(body: impl FnOnce() -> PosdomStatus) -> PosdomStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            PosdomStatus::Panic
        }
    }
}

/// A loaded problem: config, instantiated model, and the effective
/// (margin-shrunk) target.
pub struct PosdomProblem {
    config: ProblemConfig,
    model: Box<dyn OutputModel>,
    target: TargetRange,
}

/// An approximate positive domain handle.
pub struct PosdomApd {
    inner: ApproxPositiveDomain,
}

/// Contingency-table counts and derived metrics for one evaluation.
/// `tpr` is meaningful only when `tpr_defined` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PosdomEvalReport {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub tpr: f64,
    pub tpr_defined: bool,
    pub accuracy: f64,
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PosdomStatus> {
    if ptr.is_null() {
        return Err(null_arg(what));
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        PosdomStatus::NullArgument
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> PosdomStatus {
    match CString::new(text) {
        Ok(owned) => {
            unsafe { *out = owned.into_raw() };
            PosdomStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte".into());
            PosdomStatus::Validation
        }
    }
}

/// Message describing the most recent error on this thread, or null when no
/// error has occurred. The pointer stays valid until the next failing call
/// on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn posdom_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Parses a problem config from JSON, instantiates its model (launching the
/// external process for command models), and applies the margin to the
/// target.
///
/// # Safety
/// `json` must point to a NUL-terminated string; `out` must be a valid
/// pointer. On success the caller owns the handle and must release it with
/// [`posdom_problem_free`].
#[no_mangle]
pub unsafe extern "C" fn posdom_problem_from_json(
    json: *const c_char,
    out: *mut *mut PosdomProblem,
) -> PosdomStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let text = match unsafe { read_str(json, "json") } {
            Ok(text) => text,
            Err(status) => return status,
        };
        let config = match ProblemConfig::from_json(text) {
            Ok(config) => config,
            Err(e) => return fail(&e),
        };
        let target = match config.effective_target() {
            Ok(target) => target,
            Err(e) => return fail(&e),
        };
        let model = match config.build_model() {
            Ok(model) => model,
            Err(e) => return fail(&e),
        };
        let handle = Box::new(PosdomProblem {
            config,
            model,
            target,
        });
        unsafe { *out = Box::into_raw(handle) };
        PosdomStatus::Ok
    })
}

/// Releases a problem handle (and shuts down its external model process, if
/// any). Null is ignored.
///
/// # Safety
/// `problem` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posdom_problem_free(problem: *mut PosdomProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Runs grid → label → train → extract and returns the carved domain.
///
/// # Safety
/// `problem` must be a live problem handle; `out` must be valid. The caller
/// owns the resulting handle.
#[no_mangle]
pub unsafe extern "C" fn posdom_carve(
    problem: *const PosdomProblem,
    out: *mut *mut PosdomApd,
) -> PosdomStatus {
    guarded(|| {
        if problem.is_null() {
            return null_arg("problem");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let problem = unsafe { &*problem };
        let outcome = match pipeline::carve_problem(
            &problem.config.variables,
            &problem.target,
            problem.model.as_ref(),
            problem.config.granularity,
            problem.config.grid_cap(),
        ) {
            Ok(outcome) => outcome,
            Err(e) => return fail(&e),
        };
        unsafe { *out = Box::into_raw(Box::new(PosdomApd { inner: outcome.apd })) };
        PosdomStatus::Ok
    })
}

/// Keeps only the boxes whose inner grid maps entirely inside the target.
/// `inner_delta <= 0` selects the default (a quarter of the domain's
/// granularity).
///
/// # Safety
/// `problem` and `apd` must be live handles; `out` must be valid. The
/// caller owns the resulting handle.
#[no_mangle]
pub unsafe extern "C" fn posdom_refine(
    problem: *const PosdomProblem,
    apd: *const PosdomApd,
    inner_delta: f64,
    out: *mut *mut PosdomApd,
) -> PosdomStatus {
    guarded(|| {
        if problem.is_null() {
            return null_arg("problem");
        }
        if apd.is_null() {
            return null_arg("apd");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let problem = unsafe { &*problem };
        let apd = unsafe { &*apd };
        let inner_delta = if inner_delta > 0.0 {
            inner_delta
        } else {
            apd.inner.granularity / 4.0
        };
        let refined = match carve::refine(
            &apd.inner,
            problem.model.as_ref(),
            &problem.target,
            inner_delta,
        ) {
            Ok(refined) => refined,
            Err(e) => return fail(&e),
        };
        unsafe { *out = Box::into_raw(Box::new(PosdomApd { inner: refined })) };
        PosdomStatus::Ok
    })
}

/// Evaluates the domain on a uniform test set drawn with the config's seed
/// and size, filling `report`.
///
/// # Safety
/// `problem` and `apd` must be live handles; `report` must point to
/// writable memory for one report struct.
#[no_mangle]
pub unsafe extern "C" fn posdom_evaluate(
    problem: *const PosdomProblem,
    apd: *const PosdomApd,
    report: *mut PosdomEvalReport,
) -> PosdomStatus {
    guarded(|| {
        if problem.is_null() {
            return null_arg("problem");
        }
        if apd.is_null() {
            return null_arg("apd");
        }
        if report.is_null() {
            return null_arg("report");
        }
        let problem = unsafe { &*problem };
        let apd = unsafe { &*apd };
        let test = match eval::generate_test_set(
            &problem.config.variables,
            problem.config.test_size,
            problem.model.as_ref(),
            problem.config.seed,
        ) {
            Ok(test) => test,
            Err(e) => return fail(&e),
        };
        let result = eval::evaluate(&apd.inner, &test, &problem.target);
        unsafe {
            *report = PosdomEvalReport {
                tp: result.tp,
                fp: result.fp,
                fn_: result.fn_,
                tn: result.tn,
                tpr: result.tpr.unwrap_or(f64::NAN),
                tpr_defined: result.tpr.is_some(),
                accuracy: result.accuracy,
            };
        }
        PosdomStatus::Ok
    })
}

/// Parses a domain from its JSON form.
///
/// # Safety
/// `json` must point to a NUL-terminated string; `out` must be valid. The
/// caller owns the resulting handle.
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_from_json(
    json: *const c_char,
    out: *mut *mut PosdomApd,
) -> PosdomStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let text = match unsafe { read_str(json, "json") } {
            Ok(text) => text,
            Err(status) => return status,
        };
        match serde_json::from_str::<ApproxPositiveDomain>(text) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(PosdomApd { inner })) };
                PosdomStatus::Ok
            }
            Err(e) => fail(&Error::from(e)),
        }
    })
}

/// Serializes the domain to JSON.
///
/// # Safety
/// `apd` must be a live handle; `out` must be valid. Free the string with
/// [`posdom_string_free`].
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_to_json(
    apd: *const PosdomApd,
    out: *mut *mut c_char,
) -> PosdomStatus {
    guarded(|| {
        if apd.is_null() {
            return null_arg("apd");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let apd = unsafe { &*apd };
        match serde_json::to_string_pretty(&apd.inner) {
            Ok(json) => give_string(json, out),
            Err(e) => fail(&Error::from(e)),
        }
    })
}

/// Number of boxes in the domain.
///
/// # Safety
/// `apd` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_num_boxes(
    apd: *const PosdomApd,
    out: *mut usize,
) -> PosdomStatus {
    guarded(|| {
        if apd.is_null() {
            return null_arg("apd");
        }
        if out.is_null() {
            return null_arg("out");
        }
        unsafe { *out = (*apd).inner.num_boxes() };
        PosdomStatus::Ok
    })
}

/// Number of input dimensions the domain was carved over.
///
/// # Safety
/// `apd` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_dims(apd: *const PosdomApd, out: *mut usize) -> PosdomStatus {
    guarded(|| {
        if apd.is_null() {
            return null_arg("apd");
        }
        if out.is_null() {
            return null_arg("out");
        }
        unsafe { *out = (*apd).inner.dims() };
        PosdomStatus::Ok
    })
}

/// Whether the domain contains the point `(coords[0], ..., coords[len-1])`.
/// `len` must equal the domain's dimension count.
///
/// # Safety
/// `apd` must be a live handle; `coords` must point to `len` readable
/// doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_contains(
    apd: *const PosdomApd,
    coords: *const f64,
    len: usize,
    out: *mut bool,
) -> PosdomStatus {
    guarded(|| {
        if apd.is_null() {
            return null_arg("apd");
        }
        if coords.is_null() {
            return null_arg("coords");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let apd = unsafe { &*apd };
        if len != apd.inner.dims() {
            set_error(format!(
                "point has {len} coordinates, domain has {} dimensions",
                apd.inner.dims()
            ));
            return PosdomStatus::Validation;
        }
        let point = unsafe { std::slice::from_raw_parts(coords, len) };
        unsafe { *out = apd.inner.contains(point) };
        PosdomStatus::Ok
    })
}

/// Human-readable report: one line per box with per-dimension intervals.
///
/// # Safety
/// `apd` must be a live handle; `out` must be valid. Free the string with
/// [`posdom_string_free`].
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_box_report(
    apd: *const PosdomApd,
    out: *mut *mut c_char,
) -> PosdomStatus {
    guarded(|| {
        if apd.is_null() {
            return null_arg("apd");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let apd = unsafe { &*apd };
        give_string(carve::box_report(&apd.inner), out)
    })
}

/// Releases a domain handle. Null is ignored.
///
/// # Safety
/// `apd` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posdom_apd_free(apd: *mut PosdomApd) {
    if !apd.is_null() {
        drop(unsafe { Box::from_raw(apd) });
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posdom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
