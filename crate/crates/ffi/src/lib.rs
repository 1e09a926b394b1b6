//! C interface to `simterm`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or
//! `*_build` constructors and released with the matching `*_free`. Results are
//! returned as JSON strings owned by the caller and released with
//! [`simterm_string_free`]. Every fallible function returns a
//! [`SimtermStatus`]; on failure [`simterm_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use simterm::cli::SummandsInput;
use simterm::deformation::{build_deformation, central_fibre, DeformationDesc};
use simterm::terminalize::{
    build_flop_example, search_crepant_triangulation, terminalization_report, verify_triangulation, FlopPairDesc,
};
use simterm::toric::{classify_cone, cyclic_quotient_classify, QuotientActionDesc};
use simterm::{ConeDesc, Error};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimtermStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    DimensionMismatch = 10,
    InvalidInput = 11,
    EmptyCone = 12,
    NotSimplicial = 13,
    NotGorenstein = 14,
    NotQGorenstein = 15,
    NotPolygon = 16,
    NotGorensteinHomogeneous = 17,
    NotFibreCompatible = 18,
    NoPositiveRelation = 19,
    NotACircuit = 20,
    SearchExhausted = 30,
    ResourceGuard = 31,
    Panic = 99,
}

impl From<&Error> for SimtermStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch(_) => SimtermStatus::DimensionMismatch,
            Error::InvalidInput(_) => SimtermStatus::InvalidInput,
            Error::EmptyCone => SimtermStatus::EmptyCone,
            Error::NotSimplicial(_) => SimtermStatus::NotSimplicial,
            Error::NotGorenstein(_) => SimtermStatus::NotGorenstein,
            Error::NotQGorenstein(_) => SimtermStatus::NotQGorenstein,
            Error::NotPolygon(_) => SimtermStatus::NotPolygon,
            Error::NotGorensteinHomogeneous(_) => SimtermStatus::NotGorensteinHomogeneous,
            Error::NotFibreCompatible(_) => SimtermStatus::NotFibreCompatible,
            Error::NoPositiveRelation(_) => SimtermStatus::NoPositiveRelation,
            Error::NotACircuit(_) => SimtermStatus::NotACircuit,
            Error::SearchExhausted(_) => SimtermStatus::SearchExhausted,
            Error::ResourceGuard(_) => SimtermStatus::ResourceGuard,
        }
    }
}

/// Opaque rational polyhedral cone.
pub struct SimtermCone(ConeDesc);

/// Opaque homogeneous toric deformation.
pub struct SimtermDeformation(DeformationDesc);

/// Opaque flop pair.
pub struct SimtermFlopPair(FlopPairDesc);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SimtermStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SimtermStatus::from(&e), e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, storing its message and converting panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SimtermStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SimtermStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SimtermStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(SimtermStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(SimtermStatus::InvalidUtf8, e.to_string()))
}

unsafe fn parse<T: serde::de::DeserializeOwned>(s: *const c_char) -> Result<T, Failure> {
    serde_json::from_str(read_str(s)?).map_err(|e| Failure(SimtermStatus::InvalidJson, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(SimtermStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SimtermStatus::NullArgument, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SimtermStatus::NullArgument, "null output pointer".into()));
    }
    let text = serde_json::to_string(value).map_err(|e| Failure(SimtermStatus::InvalidJson, e.to_string()))?;
    *out = CString::new(text).expect("JSON contains no NUL").into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn simterm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn simterm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"dim": d, "rays": [[...], ...]}` into a cone handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_cone_from_json(json: *const c_char, out: *mut *mut SimtermCone) -> SimtermStatus {
    guard(|| put(out, SimtermCone(parse(json)?)))
}

/// # Safety
/// `cone` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn simterm_cone_free(cone: *mut SimtermCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// Serializes the cone back to JSON.
///
/// # Safety
/// `cone` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_cone_to_json(cone: *const SimtermCone, out: *mut *mut c_char) -> SimtermStatus {
    guard(|| put_json(out, &handle(cone)?.0))
}

/// Singularity flags of the cone as JSON.
///
/// # Safety
/// `cone` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_cone_classify(cone: *const SimtermCone, out: *mut *mut c_char) -> SimtermStatus {
    guard(|| put_json(out, &classify_cone(&handle(cone)?.0)?))
}

/// Crepant triangulation with empty cells, together with its verification
/// report, as `{"triangulation": ..., "check": ...}`.
///
/// # Safety
/// `cone` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_cone_terminalize(cone: *const SimtermCone, out: *mut *mut c_char) -> SimtermStatus {
    guard(|| {
        let t = search_crepant_triangulation(&handle(cone)?.0)?;
        let check = verify_triangulation(&t);
        put_json(out, &serde_json::json!({ "triangulation": t, "check": check }))
    })
}

/// Flags of the cyclic quotient `1/l (weights)` as JSON.
///
/// # Safety
/// `weights` must point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_quotient_classify(
    l: u64,
    weights: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> SimtermStatus {
    guard(|| {
        if weights.is_null() && len > 0 {
            return Err(Failure(SimtermStatus::NullArgument, "null weights".into()));
        }
        let w = if len == 0 { &[][..] } else { std::slice::from_raw_parts(weights, len) };
        let q = QuotientActionDesc::cyclic(l, w)?;
        put_json(out, &cyclic_quotient_classify(&q)?)
    })
}

/// Builds the deformation over `{"n": n, "summands": [{"vertices": ...}, ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_from_summands(
    json: *const c_char,
    out: *mut *mut SimtermDeformation,
) -> SimtermStatus {
    guard(|| {
        let input: SummandsInput = parse(json)?;
        put(out, SimtermDeformation(build_deformation(&input.summands, input.n)?))
    })
}

/// # Safety
/// `d` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_free(d: *mut SimtermDeformation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_to_json(
    d: *const SimtermDeformation,
    out: *mut *mut c_char,
) -> SimtermStatus {
    guard(|| put_json(out, &handle(d)?.0))
}

/// Total-space cone of the deformation as a new cone handle.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_cone(
    d: *const SimtermDeformation,
    out: *mut *mut SimtermCone,
) -> SimtermStatus {
    guard(|| put(out, SimtermCone(handle(d)?.0.cone().clone())))
}

/// Central fibre cone, in the fibre basis, as a new cone handle.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_central_fibre(
    d: *const SimtermDeformation,
    out: *mut *mut SimtermCone,
) -> SimtermStatus {
    guard(|| put(out, SimtermCone(central_fibre(&handle(d)?.0)?)))
}

/// Searches a crepant triangulation of the total space and returns
/// `{"triangulation": ..., "report": ...}`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_deformation_terminalize(
    d: *const SimtermDeformation,
    out: *mut *mut c_char,
) -> SimtermStatus {
    guard(|| {
        let d = &handle(d)?.0;
        let t = search_crepant_triangulation(d.cone())?;
        let report = terminalization_report(d, &t)?;
        let value: Value = serde_json::json!({ "triangulation": t, "report": report });
        put_json(out, &value)
    })
}

/// Builds the flop pair with parameters `(a, b)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_flop_build(a: u64, b: u64, out: *mut *mut SimtermFlopPair) -> SimtermStatus {
    guard(|| put(out, SimtermFlopPair(build_flop_example(a, b)?)))
}

/// # Safety
/// `pair` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn simterm_flop_free(pair: *mut SimtermFlopPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_flop_to_json(pair: *const SimtermFlopPair, out: *mut *mut c_char) -> SimtermStatus {
    guard(|| put_json(out, &handle(pair)?.0))
}

/// Deformation underlying the flop pair as a new handle.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simterm_flop_deformation(
    pair: *const SimtermFlopPair,
    out: *mut *mut SimtermDeformation,
) -> SimtermStatus {
    guard(|| put(out, SimtermDeformation(handle(pair)?.0.base.clone())))
}
