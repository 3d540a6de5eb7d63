//! C ABI over the presentation pipeline.
//!
//! Every function returns a [`PoincareStatus`]. On failure the message is
//! kept per thread and read with [`poincare_last_error`]. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`poincare_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use poincare::io::{parse_word, Job, JobInput};
use poincare::pipeline::{self, Domain};
use poincare::Error;

/// Opaque handle to a computed domain and presentation.
pub struct PoincareDomain {
    inner: Domain,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoincareStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The input is not valid job JSON.
    Parse = 3,
    /// The input parsed but failed a geometric or combinatorial check.
    Validation = 4,
    TileCap = 5,
    /// The verification of the local tessellation failed.
    VerificationFailed = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoincareFormat {
    Json = 0,
    Gap = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PoincareStatus, msg: String) -> PoincareStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> PoincareStatus {
    let status = match e {
        Error::TileCap(_) => PoincareStatus::TileCap,
        _ => PoincareStatus::Validation,
    };
    fail(status, format!("{}: {e}", e.code()))
}

fn guard(f: impl FnOnce() -> PoincareStatus) -> PoincareStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(PoincareStatus::Panic, "internal panic".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PoincareStatus> {
    if s.is_null() {
        return Err(fail(PoincareStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PoincareStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> PoincareStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PoincareStatus::Ok
        }
        Err(_) => fail(PoincareStatus::Panic, "output contains a NUL byte".into()),
    }
}

/// Parses a job and runs the pipeline. On success `*out` receives a handle
/// to release with [`poincare_domain_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn poincare_domain_from_json(json: *const c_char, out: *mut *mut PoincareDomain) -> PoincareStatus {
    guard(|| {
        if out.is_null() {
            return fail(PoincareStatus::NullPointer, "null output pointer".into());
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let input = match JobInput::from_json(text) {
            Ok(i) => i,
            Err(e) => return fail(PoincareStatus::Parse, e.to_string()),
        };
        match Job::from_input(&input).and_then(|job| pipeline::run(&job)) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(PoincareDomain { inner: d }));
                PoincareStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `domain` must come from [`poincare_domain_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn poincare_domain_free(domain: *mut PoincareDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Number of generators of the presentation, or 0 for a null handle.
///
/// # Safety
/// `domain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn poincare_generator_count(domain: *const PoincareDomain) -> usize {
    domain.as_ref().map_or(0, |d| d.inner.presentation.generators.len())
}

/// Number of relations of the presentation, or 0 for a null handle.
///
/// # Safety
/// `domain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn poincare_relation_count(domain: *const PoincareDomain) -> usize {
    domain.as_ref().map_or(0, |d| d.inner.presentation.relations.len())
}

/// Writes the presentation as JSON or as a GAP session.
///
/// # Safety
/// `domain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn poincare_present(
    domain: *const PoincareDomain,
    format: PoincareFormat,
    out: *mut *mut c_char,
) -> PoincareStatus {
    guard(|| {
        let (Some(d), false) = (domain.as_ref(), out.is_null()) else {
            return fail(PoincareStatus::NullPointer, "null argument".into());
        };
        let p = &d.inner.presentation;
        let text = match format {
            PoincareFormat::Json => serde_json::to_string(&p.to_json()).expect("JSON values serialize"),
            PoincareFormat::Gap => p.to_gap(),
        };
        write_string(out, text)
    })
}

/// Samples the local tessellation; `*passed` tells whether every check held.
///
/// # Safety
/// `domain` must be a live handle and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn poincare_verify(domain: *const PoincareDomain, samples: usize, passed: *mut bool) -> PoincareStatus {
    guard(|| {
        let (Some(d), false) = (domain.as_ref(), passed.is_null()) else {
            return fail(PoincareStatus::NullPointer, "null argument".into());
        };
        let report = d.inner.verify(samples);
        *passed = report.passed;
        if report.passed {
            PoincareStatus::Ok
        } else {
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            fail(PoincareStatus::VerificationFailed, format!("failed checks: {}", failed.join(", ")))
        }
    })
}

/// Factors the element named by `word` (in the input generators) into the
/// presentation's generators; `*out` receives the word.
///
/// # Safety
/// `domain` must be a live handle, `word` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn poincare_factor(
    domain: *const PoincareDomain,
    word: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> PoincareStatus {
    guard(|| {
        let (Some(d), false) = (domain.as_ref(), out.is_null()) else {
            return fail(PoincareStatus::NullPointer, "null argument".into());
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let job = &d.inner.job;
        let result = parse_word(text, &job.names).and_then(|w| d.inner.factor(&job.eval(&w), seed));
        match result {
            Ok(f) => write_string(out, d.inner.presentation.render(&f.word)),
            Err(e) => from_error(&e),
        }
    })
}

/// The last error message on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn poincare_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn poincare_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
