//! C ABI for `maxvar-core`.
//!
//! Sequences live behind an opaque `MaxvarSequence` handle. Every fallible
//! call returns a `MaxvarStatus`; on failure `maxvar_last_error` describes
//! the most recent error on the calling thread. Strings handed out by the
//! library are released with `maxvar_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maxvar_core::lemmas::{run_checks, CheckId};
use maxvar_core::maximal::max_at;
use maxvar_core::rational;
use maxvar_core::variation::var_ratio;
use maxvar_core::{FiniteSequence, OperatorKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxvarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ComputationError = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxvarOperator {
    Centered = 0,
    NonCentered = 1,
}

impl From<MaxvarOperator> for OperatorKind {
    fn from(op: MaxvarOperator) -> Self {
        match op {
            MaxvarOperator::Centered => OperatorKind::Centered,
            MaxvarOperator::NonCentered => OperatorKind::NonCentered,
        }
    }
}

/// Opaque handle to a finitely supported non-negative sequence.
pub struct MaxvarSequence {
    inner: FiniteSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: MaxvarStatus, msg: impl Into<String>) -> MaxvarStatus {
    set_error(msg);
    status
}

fn guarded(body: impl FnOnce() -> MaxvarStatus) -> MaxvarStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MaxvarStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, MaxvarStatus> {
    if s.is_null() {
        return Err(fail(MaxvarStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MaxvarStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> MaxvarStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MaxvarStatus::Ok
        }
        Err(_) => fail(MaxvarStatus::ComputationError, "output contains a NUL byte"),
    }
}

fn emit_sequence(out: *mut *mut MaxvarSequence, f: FiniteSequence) -> MaxvarStatus {
    let handle = Box::new(MaxvarSequence { inner: f });
    // SAFETY: caller checked `out` for null
    unsafe { *out = Box::into_raw(handle) };
    MaxvarStatus::Ok
}

/// Parses the line-oriented sequence text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxvar_sequence_parse(
    text: *const c_char,
    out: *mut *mut MaxvarSequence,
) -> MaxvarStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MaxvarStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match FiniteSequence::parse_seqtext(text) {
            Ok(f) => emit_sequence(out, f),
            Err(e) => fail(MaxvarStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds a sequence from `len` integer values starting at `offset`.
///
/// # Safety
/// `values` must point to `len` readable integers (or be null with
/// `len == 0`); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxvar_sequence_from_ints(
    offset: i64,
    values: *const i64,
    len: usize,
    out: *mut *mut MaxvarSequence,
) -> MaxvarStatus {
    guarded(|| {
        if out.is_null() || (values.is_null() && len > 0) {
            return fail(MaxvarStatus::NullPointer, "null pointer argument");
        }
        let vals = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(values, len)
        };
        match FiniteSequence::from_ints(offset, vals) {
            Ok(f) => emit_sequence(out, f),
            Err(e) => fail(MaxvarStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `seq` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxvar_sequence_free(seq: *mut MaxvarSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Maximal function value at `n` as an exact `p/q` string.
///
/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxvar_max_at(
    seq: *const MaxvarSequence,
    op: MaxvarOperator,
    n: i64,
    out: *mut *mut c_char,
) -> MaxvarStatus {
    guarded(|| {
        if seq.is_null() || out.is_null() {
            return fail(MaxvarStatus::NullPointer, "null pointer argument");
        }
        let f = &(*seq).inner;
        if f.is_zero() {
            return emit_string(out, "0".into());
        }
        match max_at(f, op.into(), n) {
            Ok(v) => emit_string(out, rational::fmt(&v)),
            Err(e) => fail(MaxvarStatus::ComputationError, e.to_string()),
        }
    })
}

/// `{"kind", "var_f", "var_Mf", "ratio"}` with string-encoded rationals.
///
/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn maxvar_variation_json(
    seq: *const MaxvarSequence,
    op: MaxvarOperator,
    out: *mut *mut c_char,
) -> MaxvarStatus {
    guarded(|| {
        if seq.is_null() || out.is_null() {
            return fail(MaxvarStatus::NullPointer, "null pointer argument");
        }
        match var_ratio(&(*seq).inner, op.into()) {
            Ok(report) => emit_string(out, serde_json::to_string(&report).expect("serializable")),
            Err(e) => fail(MaxvarStatus::ComputationError, e.to_string()),
        }
    })
}

/// Runs the comma-separated checks (`1,2,3,4,5,thm,conj,nc`) and writes the
/// list of check records as JSON. `all_pass` receives 1 when every check
/// passed, else 0.
///
/// # Safety
/// `seq` must be a live handle, `checks` a NUL-terminated string, and `out`
/// and `all_pass` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn maxvar_verify_json(
    seq: *const MaxvarSequence,
    checks: *const c_char,
    out: *mut *mut c_char,
    all_pass: *mut i32,
) -> MaxvarStatus {
    guarded(|| {
        if seq.is_null() || out.is_null() || all_pass.is_null() {
            return fail(MaxvarStatus::NullPointer, "null pointer argument");
        }
        let spec = match read_str(checks) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let ids: Result<Vec<CheckId>, String> =
            spec.split(',').map(|s| s.trim().parse()).collect();
        let ids = match ids {
            Ok(ids) => ids,
            Err(e) => return fail(MaxvarStatus::InvalidArgument, e),
        };
        match run_checks(&(*seq).inner, &ids) {
            Ok(results) => {
                *all_pass = i32::from(results.iter().all(|c| c.pass));
                emit_string(out, serde_json::to_string(&results).expect("serializable"))
            }
            Err(e) => fail(MaxvarStatus::ComputationError, e.to_string()),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxvar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn maxvar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn maxvar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
