//! C interface over the core library: opaque handles, status codes, and
//! JSON reports. Every entry point is panic-safe and tolerates null
//! pointers; failures leave a message readable via `icoh_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use infocoh::cochain::{cocycle_residual, entropy_cochain};
use infocoh::cohomology::fit::fit_nullspace;
use infocoh::cohomology::predict::{concordance, predict_h1, H1Prediction};
use infocoh::cohomology::{assemble_z1_system, h0_dimension, z1_h1_dimensions};
use infocoh::context::GridContext;
use infocoh::funceq::modular::modular_group_check;
use infocoh::funceq::{assemble_funceq_system, entropy_sample, funceq_residual};
use infocoh::io::parse_spec_str;
use infocoh::numeric::AlphaParam;
use infocoh::prob::ProbabilityFunctor;
use infocoh::structure::{limit_sections, validate_structure, InfoStructure};
use infocoh::Error;

/// Outcome of a call. Anything other than `Ok` leaves a diagnostic in
/// `icoh_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcohStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    ComputeFailed = 4,
    Panicked = 5,
}

/// Structural degree-1 verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcohVerdict {
    Finite = 0,
    Infinite = 1,
    Unknown = 2,
}

/// Opaque handle owning a parsed structure and its probability functor.
pub struct IcohStructure {
    s: InfoStructure,
    q: ProbabilityFunctor,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> IcohStatus {
    match err {
        Error::Input(_) => IcohStatus::InvalidInput,
        _ => IcohStatus::ComputeFailed,
    }
}

fn fail(err: &Error) -> IcohStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn guard<F: FnOnce() -> IcohStatus>(f: F) -> IcohStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            IcohStatus::Panicked
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, IcohStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(IcohStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        IcohStatus::InvalidUtf8
    })
}

unsafe fn deref<'a>(handle: *const IcohStructure) -> Result<&'a IcohStructure, IcohStatus> {
    if handle.is_null() {
        set_error("null structure handle");
        return Err(IcohStatus::NullPointer);
    }
    Ok(&*handle)
}

fn out_slot<'a, T>(out: *mut T) -> Result<&'a mut T, IcohStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(IcohStatus::NullPointer);
    }
    Ok(unsafe { &mut *out })
}

fn alpha_of(alpha: f64) -> Result<AlphaParam, IcohStatus> {
    AlphaParam::new(alpha).map_err(|e| fail(&e))
}

fn export_string(text: String, out: &mut *mut c_char) -> IcohStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            IcohStatus::Ok
        }
        Err(_) => {
            set_error("report contains interior NUL");
            IcohStatus::ComputeFailed
        }
    }
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn icoh_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn icoh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a JSON description (concrete, abstract, or simplicial) into a
/// handle. The input must satisfy the structure axioms.
///
/// # Safety
///
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the handle and must be released with
/// `icoh_structure_free`.
#[no_mangle]
pub unsafe extern "C" fn icoh_structure_parse(
    json: *const c_char,
    out: *mut *mut IcohStructure,
) -> IcohStatus {
    guard(|| {
        let slot = match out_slot(out) {
            Ok(s) => s,
            Err(st) => return st,
        };
        *slot = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(st) => return st,
        };
        match parse_spec_str(text) {
            Ok((s, q)) => {
                *slot = Box::into_raw(Box::new(IcohStructure { s, q }));
                IcohStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a handle returned by `icoh_structure_parse`. Null is ignored.
///
/// # Safety
///
/// `handle` must be null or a pointer returned by `icoh_structure_parse`
/// that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn icoh_structure_free(handle: *mut IcohStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of variables in the structure, including the terminal object.
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_object_count(
    handle: *const IcohStructure,
    out: *mut usize,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        *slot = h.s.len();
        IcohStatus::Ok
    })
}

/// Number of sections of the inverse limit (compatible value tuples).
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_section_count(
    handle: *const IcohStructure,
    out: *mut usize,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        *slot = limit_sections(&h.s).len();
        IcohStatus::Ok
    })
}

/// Re-run the structure axioms; writes true when every check passes.
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_validate(
    handle: *const IcohStructure,
    out: *mut bool,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        *slot = validate_structure(&h.s).all_pass();
        IcohStatus::Ok
    })
}

/// Dimension of degree-0 cocycles over laws with denominator at most
/// `bound`.
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_h0_dimension(
    handle: *const IcohStructure,
    alpha: f64,
    bound: u32,
    out: *mut usize,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let ctx = match GridContext::new(&h.s, &h.q, bound) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        *slot = h0_dimension(&ctx, a).dimension;
        IcohStatus::Ok
    })
}

/// Degree-1 grid dimensions: cocycles, coboundaries, and their quotient.
/// Any output pointer may be null to skip that value.
///
/// # Safety
///
/// `handle` must be a live handle; non-null outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn icoh_grid_dimensions(
    handle: *const IcohStructure,
    alpha: f64,
    bound: u32,
    out_z1: *mut usize,
    out_b1: *mut usize,
    out_h1: *mut usize,
) -> IcohStatus {
    guard(|| {
        let h = match deref(handle) {
            Ok(h) => h,
            Err(st) => return st,
        };
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let ctx = match GridContext::new(&h.s, &h.q, bound) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let sys = assemble_z1_system(&ctx, a);
        let dims = z1_h1_dimensions(&sys, &ctx);
        if !out_z1.is_null() {
            *out_z1 = dims.z1;
        }
        if !out_b1.is_null() {
            *out_b1 = dims.b1;
        }
        if !out_h1.is_null() {
            *out_h1 = dims.h1;
        }
        IcohStatus::Ok
    })
}

/// Max-norm cocycle residual of the entropy cochain. Exactly 0 on the
/// rational lane at alpha = 1.
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_entropy_residual(
    handle: *const IcohStructure,
    alpha: f64,
    bound: u32,
    out: *mut f64,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let ctx = match GridContext::new(&h.s, &h.q, bound) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let f = entropy_cochain(&ctx, a);
        match cocycle_residual(&ctx, &f) {
            Ok(rep) => {
                *slot = if rep.exact && rep.exact_zero {
                    0.0
                } else {
                    rep.max_residual
                };
                IcohStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Structural degree-1 verdict. `out_dimension` (nullable) receives the
/// predicted dimension for a finite verdict and 0 otherwise.
///
/// # Safety
///
/// `handle` must be a live handle; `out_verdict` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_predict_h1(
    handle: *const IcohStructure,
    alpha: f64,
    seed: u64,
    out_verdict: *mut IcohVerdict,
    out_dimension: *mut usize,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out_verdict)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let prediction = match predict_h1(&h.s, &h.q, a, seed) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let (verdict, dim) = match prediction {
            H1Prediction::Finite { dimension, .. } => (IcohVerdict::Finite, dimension),
            H1Prediction::Infinite { .. } => (IcohVerdict::Infinite, 0),
            H1Prediction::Unknown { .. } => (IcohVerdict::Unknown, 0),
        };
        *slot = verdict;
        if !out_dimension.is_null() {
            *out_dimension = dim;
        }
        IcohStatus::Ok
    })
}

/// Full degree-1 report as a JSON string: grid dimensions, entropy
/// residual, structural prediction, nullspace fit, and the concordance
/// verdict.
///
/// # Safety
///
/// `handle` must be a live handle; `out` must be a valid pointer. On
/// success `*out` must be released with `icoh_string_free`.
#[no_mangle]
pub unsafe extern "C" fn icoh_h1_report_json(
    handle: *const IcohStructure,
    alpha: f64,
    bound: u32,
    tol: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> IcohStatus {
    guard(|| {
        let (h, slot) = match (deref(handle), out_slot(out)) {
            (Ok(h), Ok(s)) => (h, s),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        *slot = ptr::null_mut();
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let ctx = match GridContext::new(&h.s, &h.q, bound) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let sys = assemble_z1_system(&ctx, a);
        let dims = z1_h1_dimensions(&sys, &ctx);
        let f = entropy_cochain(&ctx, a);
        let residual = match cocycle_residual(&ctx, &f) {
            Ok(rep) => rep,
            Err(e) => return fail(&e),
        };
        let prediction = match predict_h1(&h.s, &h.q, a, seed) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let fit = fit_nullspace(&ctx, a, &dims, &sys.columns, &h.s, tol);
        let agreement = concordance(&prediction, &dims, &fit);
        let report = serde_json::json!({
            "alpha": alpha,
            "N": bound,
            "z1": dims.z1,
            "b1": dims.b1,
            "h1": dims.h1,
            "entropy_residual": if residual.exact && residual.exact_zero {
                0.0
            } else {
                residual.max_residual
            },
            "verdict": prediction.verdict(),
            "structural_dimension": agreement.structural,
            "explained": fit.explained.iter().filter(|&&e| e).count(),
            "basis_vectors": fit.explained.len(),
            "consistent": agreement.consistent,
        });
        export_string(report.to_string(), slot)
    })
}

/// Max-norm residual of the entropy sample against the functional-equation
/// system over the Farey grid of order `bound`. Exactly 0 at alpha = 1.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icoh_funceq_residual(
    alpha: f64,
    bound: u32,
    out: *mut f64,
) -> IcohStatus {
    guard(|| {
        let slot = match out_slot(out) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let a = match alpha_of(alpha) {
            Ok(a) => a,
            Err(st) => return st,
        };
        let sys = match assemble_funceq_system(a, bound) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        let sample = entropy_sample(&sys.grid, a);
        match funceq_residual(&sys, &sample) {
            Ok(rep) => {
                *slot = if rep.exact && rep.exact_zero {
                    0.0
                } else {
                    rep.max_residual
                };
                IcohStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Verify the generator identities of the symmetry group in exact integer
/// arithmetic. Either output may be null.
///
/// # Safety
///
/// Non-null outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn icoh_modular_identities(
    out_passed: *mut usize,
    out_total: *mut usize,
) -> IcohStatus {
    guard(|| {
        let checks = modular_group_check();
        if !out_passed.is_null() {
            *out_passed = checks.iter().filter(|c| c.pass).count();
        }
        if !out_total.is_null() {
            *out_total = checks.len();
        }
        IcohStatus::Ok
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `ptr` must be null or a string returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn icoh_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}
