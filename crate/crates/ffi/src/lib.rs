//! C ABI for `residuum`.
//!
//! Every function returns a [`ResiduumStatus`]. On failure the message is available
//! from [`residuum_last_error`] until the next call on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`residuum_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use residuum::cli::{self, Problem};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResiduumStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EvaluationError = 4,
    NotCertified = 5,
    VerifyMismatch = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResiduumCommand {
    Analyze = 0,
    Eval = 1,
    Verify = 2,
    Grouping = 3,
}

/// A parsed problem. Opaque to C.
pub struct ResiduumProblem {
    inner: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> ResiduumStatus) -> ResiduumStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            ResiduumStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, ResiduumStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(ResiduumStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ResiduumStatus::InvalidUtf8
    })
}

unsafe fn problem<'a>(p: *const ResiduumProblem) -> Result<&'a Problem, ResiduumStatus> {
    if p.is_null() {
        set_error("null problem handle");
        return Err(ResiduumStatus::NullArgument);
    }
    Ok(&(*p).inner)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failure on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn residuum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn residuum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a problem description at `precision` bits (0 selects 128).
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn residuum_problem_parse(
    source: *const c_char,
    precision: u32,
    out: *mut *mut ResiduumProblem,
) -> ResiduumStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return ResiduumStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let src = tri!(text(source));
        let prec = if precision == 0 { 128 } else { precision };
        if prec < 64 {
            set_error("precision must be at least 64 bits");
            return ResiduumStatus::InvalidArgument;
        }
        let spec = match cli::parse(src) {
            Ok(s) => s,
            Err(e) => {
                set_error(format!("parse error at {e}"));
                return ResiduumStatus::ParseError;
            }
        };
        match cli::build(&spec, prec) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(ResiduumProblem { inner: p }));
                ResiduumStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                ResiduumStatus::ParseError
            }
        }
    })
}

/// Release a problem. NULL is ignored.
///
/// # Safety
/// `p` must come from [`residuum_problem_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn residuum_problem_free(p: *mut ResiduumProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of integration variables.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn residuum_problem_dimension(p: *const ResiduumProblem, out: *mut usize) -> ResiduumStatus {
    guard(|| {
        let p = tri!(problem(p));
        if out.is_null() {
            set_error("null output pointer");
            return ResiduumStatus::NullArgument;
        }
        *out = p.arrangement.dimension();
        ResiduumStatus::Ok
    })
}

/// Residue-formula value. `certified` receives 1 or 0. Returns `Ok` even when the
/// result is not certified.
///
/// # Safety
/// `p` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn residuum_eval(
    p: *const ResiduumProblem,
    assume_convergent: c_int,
    re: *mut f64,
    im: *mut f64,
    certified: *mut c_int,
) -> ResiduumStatus {
    guard(|| {
        let p = tri!(problem(p));
        if re.is_null() || im.is_null() || certified.is_null() {
            set_error("null output pointer");
            return ResiduumStatus::NullArgument;
        }
        let opts = residuum::residue_engine::EvalOptions { assume_convergent: assume_convergent != 0 };
        match residuum::residue_engine::evaluate_integral(&p.arrangement, &p.polyhedron, &opts) {
            Ok(r) => {
                let z = r.value.to_c64();
                *re = z.re;
                *im = z.im;
                *certified = c_int::from(r.certificate.certified());
                ResiduumStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                ResiduumStatus::EvaluationError
            }
        }
    })
}

/// Direct quadrature of the integral (box half-width `t`, relative tolerance `tol`).
///
/// # Safety
/// `p` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn residuum_quadrature(
    p: *const ResiduumProblem,
    t: f64,
    tol: f64,
    re: *mut f64,
    im: *mut f64,
    error_bound: *mut f64,
) -> ResiduumStatus {
    guard(|| {
        let p = tri!(problem(p));
        if re.is_null() || im.is_null() || error_bound.is_null() {
            set_error("null output pointer");
            return ResiduumStatus::NullArgument;
        }
        if t.is_nan() || t <= 0.0 || tol.is_nan() || tol <= 0.0 {
            set_error("box half-width and tolerance must be positive");
            return ResiduumStatus::InvalidArgument;
        }
        match residuum::oracle::quad_integral(&p.arrangement, t, tol) {
            Ok(q) => {
                let z = q.estimate.to_c64();
                *re = z.re;
                *im = z.im;
                *error_bound = q.error_bound;
                ResiduumStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                ResiduumStatus::EvaluationError
            }
        }
    })
}

/// Run a command and return its JSON document in `*json` (free with
/// [`residuum_string_free`]). `box_halfwidth`/`tol` apply to `Verify`; `grouping` may be
/// NULL (canonical) and applies to `Grouping`. The status mirrors the CLI exit code:
/// `NotCertified` and `VerifyMismatch` still produce the document.
///
/// # Safety
/// `p` must be a live handle; `grouping` NULL or a NUL-terminated string; `json` valid.
#[no_mangle]
pub unsafe extern "C" fn residuum_report_json(
    p: *const ResiduumProblem,
    command: ResiduumCommand,
    box_halfwidth: f64,
    tol: f64,
    grouping: *const c_char,
    json: *mut *mut c_char,
) -> ResiduumStatus {
    guard(|| {
        let p = tri!(problem(p));
        if json.is_null() {
            set_error("null output pointer");
            return ResiduumStatus::NullArgument;
        }
        *json = ptr::null_mut();
        let requested = if grouping.is_null() { None } else { Some(tri!(text(grouping))) };
        let result = match command {
            ResiduumCommand::Analyze => cli::analyze(p),
            ResiduumCommand::Eval => cli::eval(p, false),
            ResiduumCommand::Verify => cli::verify(p, box_halfwidth, tol, false),
            ResiduumCommand::Grouping => cli::grouping(p, requested),
        };
        let outcome = match result {
            Ok(o) => o,
            Err(e) => {
                set_error(e);
                return ResiduumStatus::EvaluationError;
            }
        };
        let doc = outcome.render(true);
        *json = CString::new(doc).expect("JSON has no NUL bytes").into_raw();
        match outcome.exit {
            cli::EXIT_OK => ResiduumStatus::Ok,
            cli::EXIT_NOT_CERTIFIED => {
                set_error("result is not certified");
                ResiduumStatus::NotCertified
            }
            cli::EXIT_MISMATCH => {
                set_error("residue value and quadrature disagree");
                ResiduumStatus::VerifyMismatch
            }
            _ => ResiduumStatus::EvaluationError,
        }
    })
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn residuum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
