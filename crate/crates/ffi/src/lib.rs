//! C ABI over the carpetdim library.
//!
//! Systems are opaque handles created by [`cd_system_parse`] and released with
//! [`cd_system_free`]. Every call returns a [`CdStatus`]; on failure the
//! message is available from [`cd_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use carpetdim::dims::{assouad_dimension, box_dimension, dimension_report, lower_dimension, ReportOptions};
use carpetdim::entropy::{analyze, lambda_table, DEFAULT_TOL};
use carpetdim::model::decompose;
use carpetdim::oracle::occupied_squares_all;
use carpetdim::sequences::SequenceEngine;
use carpetdim::{CarpetError, CarpetSystem};

/// Result codes. The first five match the exit codes of the command line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdStatus {
    Ok = 0,
    Io = 1,
    Invalid = 2,
    Budget = 3,
    Numeric = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque handle to a validated carpet system.
pub struct CdSystem {
    inner: CarpetSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &CarpetError) -> CdStatus {
    if err.is_validation() || matches!(err, CarpetError::InvalidArgument(_) | CarpetError::NotApplicable(_)) {
        CdStatus::Invalid
    } else if err.is_budget() {
        CdStatus::Budget
    } else {
        CdStatus::Numeric
    }
}

fn guard(f: impl FnOnce() -> Result<(), CdStatus>) -> CdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CdStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            CdStatus::Panic
        }
    }
}

fn lift<T>(r: carpetdim::Result<T>) -> Result<T, CdStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn system<'a>(handle: *const CdSystem) -> Result<&'a CarpetSystem, CdStatus> {
    match handle.as_ref() {
        Some(h) => Ok(&h.inner),
        None => {
            set_error("null system handle");
            Err(CdStatus::NullPointer)
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), CdStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(CdStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Parses a JSON system description. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_system_parse(json: *const c_char, out: *mut *mut CdSystem) -> CdStatus {
    guard(|| {
        if json.is_null() {
            set_error("null input string");
            return Err(CdStatus::NullPointer);
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            set_error("input is not valid UTF-8");
            CdStatus::Invalid
        })?;
        let sys = lift(carpetdim::parse_system(text))?;
        write(out, Box::into_raw(Box::new(CdSystem { inner: sys })))
    })
}

/// Releases a handle. Passing null is a no-op.
///
/// # Safety
/// `handle` must come from [`cd_system_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cd_system_free(handle: *mut CdSystem) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_system_vertex_count(handle: *const CdSystem, out: *mut usize) -> CdStatus {
    guard(|| write(out, system(handle)?.vertex_count()))
}

/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_system_edge_count(handle: *const CdSystem, out: *mut usize) -> CdStatus {
    guard(|| write(out, system(handle)?.edges().len()))
}

/// Box-counting dimension of the union of all vertex sets.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_box_dimension(handle: *const CdSystem, out: *mut f64) -> CdStatus {
    guard(|| {
        let sys = system(handle)?;
        let dec = decompose(sys);
        let ent = lift(analyze(sys, &dec, 1, DEFAULT_TOL))?;
        write(out, box_dimension(sys, &dec, &ent).0)
    })
}

/// Rigorous bracket `[lo, hi]` for the Assouad dimension. `depth` controls
/// how far fiber entropies are refined.
///
/// # Safety
/// `handle` must be a live handle; `lo` and `hi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cd_assouad_bracket(
    handle: *const CdSystem,
    depth: usize,
    lo: *mut f64,
    hi: *mut f64,
) -> CdStatus {
    guard(|| {
        let sys = system(handle)?;
        if depth == 0 {
            return lift(Err(CarpetError::InvalidArgument("depth must be at least 1".into())));
        }
        let dec = decompose(sys);
        let ent = lift(analyze(sys, &dec, depth, DEFAULT_TOL))?;
        let b = assouad_dimension(sys, &dec, &ent);
        write(lo, b.lo)?;
        write(hi, b.hi)
    })
}

/// Upper estimate of the lower dimension from depths `1..=k_max`.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_lower_estimate(handle: *const CdSystem, k_max: usize, out: *mut f64) -> CdStatus {
    guard(|| {
        let sys = system(handle)?;
        if k_max == 0 {
            return lift(Err(CarpetError::InvalidArgument("k_max must be at least 1".into())));
        }
        let dec = decompose(sys);
        let lambda = lift(lambda_table(sys, DEFAULT_TOL))?;
        let engine = lift(SequenceEngine::new(sys, &dec, &lambda))?;
        write(out, lift(lower_dimension(&engine, sys, k_max))?.estimate)
    })
}

/// Full dimension report as a JSON string. Release it with [`cd_string_free`].
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_report_json(
    handle: *const CdSystem,
    k_max: usize,
    tol: f64,
    out: *mut *mut c_char,
) -> CdStatus {
    guard(|| {
        let sys = system(handle)?;
        let report = lift(dimension_report(sys, ReportOptions { k_max, tol }))?;
        let text = CString::new(report.to_json()).map_err(|_| CdStatus::Panic)?;
        write(out, text.into_raw())
    })
}

/// Number of level-`k` approximate squares meeting the attractor.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_occupancy_count(handle: *const CdSystem, k: usize, out: *mut u64) -> CdStatus {
    guard(|| {
        let sys = system(handle)?;
        let occ = lift(occupied_squares_all(sys, k))?;
        write(out, occ.len() as u64)
    })
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn cd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
