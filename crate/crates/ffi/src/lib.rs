//! C ABI over the `breuil` crate.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`BreuilStatus`]; on failure, [`breuil_last_error`] describes the error
//! for the calling thread. Strings returned by the library are released with
//! [`breuil_string_free`].
//!
//! Pointer arguments must be null or valid: handles live (not yet freed),
//! strings nul-terminated, output slots writable. Null inputs are reported
//! as `BREUIL_STATUS_NULL_POINTER`, never dereferenced.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use breuil::abelian::{cokernel, image, kernel};
use breuil::functors::{lift_object, truncate};
use breuil::io::{parse_module, parse_morphism, serialize_module, serialize_morphism};
use breuil::phimod::{hom_dimension, is_isomorphic};
use breuil::random::random_object_seeded;
use breuil::ring::fil_quotient_dim;
use breuil::{BreuilError, PhiModule, PhiMorphism, RingParams};

/// Result codes. `BREUIL_STATUS_OK` is zero; every other value names the
/// failure class.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreuilStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    ParamViolation = 10,
    ParamMismatch = 11,
    NotAUnit = 12,
    InvalidLevels = 13,
    NotInvertible = 14,
    DimensionMismatch = 15,
    NotAPresentation = 16,
    NotAMorphism = 17,
    NotExact = 18,
    RegimeViolation = 19,
    LevelViolation = 20,
    RankViolation = 21,
    VerificationFailed = 22,
    InternalCheckFailed = 23,
    CriteriaDisagree = 24,
    SearchInconclusive = 25,
    ParseError = 26,
    ValidationError = 27,
}

impl From<&BreuilError> for BreuilStatus {
    fn from(e: &BreuilError) -> Self {
        match e {
            BreuilError::ParamViolation(_) => BreuilStatus::ParamViolation,
            BreuilError::ParamMismatch(_) => BreuilStatus::ParamMismatch,
            BreuilError::NotAUnit => BreuilStatus::NotAUnit,
            BreuilError::InvalidLevels { .. } => BreuilStatus::InvalidLevels,
            BreuilError::NotInvertible => BreuilStatus::NotInvertible,
            BreuilError::DimensionMismatch(_) => BreuilStatus::DimensionMismatch,
            BreuilError::NotAPresentation { .. } => BreuilStatus::NotAPresentation,
            BreuilError::NotAMorphism(_) => BreuilStatus::NotAMorphism,
            BreuilError::NotExact(_) => BreuilStatus::NotExact,
            BreuilError::RegimeViolation(_) => BreuilStatus::RegimeViolation,
            BreuilError::LevelViolation(_) => BreuilStatus::LevelViolation,
            BreuilError::RankViolation { .. } => BreuilStatus::RankViolation,
            BreuilError::VerificationFailed(_) => BreuilStatus::VerificationFailed,
            BreuilError::InternalCheckFailed(_) => BreuilStatus::InternalCheckFailed,
            BreuilError::CriteriaDisagree { .. } => BreuilStatus::CriteriaDisagree,
            BreuilError::SearchInconclusive { .. } => BreuilStatus::SearchInconclusive,
            BreuilError::ParseError { .. } => BreuilStatus::ParseError,
            BreuilError::ValidationError(_) => BreuilStatus::ValidationError,
        }
    }
}

/// Opaque handle to a validated object.
pub struct BreuilModule(PhiModule);

/// Opaque handle to a morphism together with its endpoints.
pub struct BreuilMorphism(PhiMorphism);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let text = CString::new(bytes).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

struct Failure(BreuilStatus, String);

impl From<BreuilError> for Failure {
    fn from(e: BreuilError) -> Self {
        Failure(BreuilStatus::from(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(body: impl FnOnce() -> Outcome) -> BreuilStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            BreuilStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside the library");
            BreuilStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BreuilStatus::NullPointer, format!("null pointer passed as `{what}`"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(BreuilStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn store_module(out: *mut *mut BreuilModule, m: PhiModule) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(BreuilModule(m))));
    Ok(())
}

unsafe fn store_morphism(out: *mut *mut BreuilMorphism, f: PhiMorphism, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(Box::into_raw(Box::new(BreuilMorphism(f))));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, text: String) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(text).map_err(|_| Failure(BreuilStatus::Panic, "serializer produced a nul byte".into()))?;
    out.write(c.into_raw());
    Ok(())
}

/// Message for the last failed call on this thread, or the empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn breuil_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by the library.
#[no_mangle]
pub unsafe extern "C" fn breuil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `breuil-phimod/1` document. A monodromy operator, if present,
/// is validated and then dropped.
#[no_mangle]
pub unsafe extern "C" fn breuil_module_parse(json: *const c_char, out: *mut *mut BreuilModule) -> BreuilStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        store_module(out, parse_module(text)?.into_phi())
    })
}

/// A seeded random object with `c = 1`.
#[no_mangle]
pub unsafe extern "C" fn breuil_module_random(
    seed: u64,
    p: u32,
    e: u32,
    r: u32,
    s: usize,
    rank: usize,
    out: *mut *mut BreuilModule,
) -> BreuilStatus {
    guard(|| {
        let params = RingParams::with_unit_c(p, e, r, s)?;
        store_module(out, random_object_seeded(seed, &params, rank))
    })
}

#[no_mangle]
pub unsafe extern "C" fn breuil_module_free(m: *mut BreuilModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Rank of `M`, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn breuil_module_rank(m: *const BreuilModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.rank())
}

/// Canonical `breuil-phimod/1` text; free with [`breuil_string_free`].
#[no_mangle]
pub unsafe extern "C" fn breuil_module_to_json(m: *const BreuilModule, out: *mut *mut c_char) -> BreuilStatus {
    guard(|| store_string(out, serialize_module(&deref(m, "m")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn breuil_module_dual(m: *const BreuilModule, out: *mut *mut BreuilModule) -> BreuilStatus {
    guard(|| store_module(out, deref(m, "m")?.0.cartier_dual()))
}

#[no_mangle]
pub unsafe extern "C" fn breuil_module_is_unipotent(m: *const BreuilModule, out: *mut bool) -> BreuilStatus {
    guard(|| store(out, deref(m, "m")?.0.is_unipotent()?, "out"))
}

/// Writes the ranks of `M^m`, `M^nil`, `M^uni`, `M^et` to `out[0..4]`;
/// `out` must have room for four values.
#[no_mangle]
pub unsafe extern "C" fn breuil_module_parts_ranks(m: *const BreuilModule, out: *mut usize) -> BreuilStatus {
    guard(|| {
        let ranks = deref(m, "m")?.0.parts()?.ranks();
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(ranks.as_ptr(), out, 4);
        Ok(())
    })
}

/// `F_p`-dimension of `Hom(M1, M2)`.
#[no_mangle]
pub unsafe extern "C" fn breuil_hom_dimension(
    m1: *const BreuilModule,
    m2: *const BreuilModule,
    out: *mut usize,
) -> BreuilStatus {
    guard(|| store(out, hom_dimension(&deref(m1, "m1")?.0, &deref(m2, "m2")?.0)?, "out"))
}

/// Writes whether `M1 ≅ M2`. Fails with `SEARCH_INCONCLUSIVE` when the
/// morphism space is too large to decide.
#[no_mangle]
pub unsafe extern "C" fn breuil_modules_isomorphic(
    m1: *const BreuilModule,
    m2: *const BreuilModule,
    out: *mut bool,
) -> BreuilStatus {
    guard(|| store(out, is_isomorphic(&deref(m1, "m1")?.0, &deref(m2, "m2")?.0)?.is_some(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn breuil_module_truncate(
    m: *const BreuilModule,
    s: usize,
    out: *mut *mut BreuilModule,
) -> BreuilStatus {
    guard(|| store_module(out, truncate(&deref(m, "m")?.0, s)?))
}

#[no_mangle]
pub unsafe extern "C" fn breuil_module_lift(m: *const BreuilModule, t: usize, out: *mut *mut BreuilModule) -> BreuilStatus {
    guard(|| store_module(out, lift_object(&deref(m, "m")?.0, t)?))
}

/// `dim_{F_p} Fil^a T_s / Fil^b T_s` for `Fil^a T_s = u^{ea} T_s`.
#[no_mangle]
pub unsafe extern "C" fn breuil_fil_quotient_dim(a: u32, b: u32, e: u32, s: usize, out: *mut usize) -> BreuilStatus {
    guard(|| store(out, fil_quotient_dim(a, b, e, s)?, "out"))
}

/// Parses a `breuil-morphism/1` document with embedded endpoints.
#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_parse(json: *const c_char, out: *mut *mut BreuilMorphism) -> BreuilStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        store_morphism(out, parse_morphism(text, None)?, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_free(f: *mut BreuilMorphism) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_to_json(f: *const BreuilMorphism, out: *mut *mut c_char) -> BreuilStatus {
    guard(|| store_string(out, serialize_morphism(&deref(f, "f")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_is_zero(f: *const BreuilMorphism, out: *mut bool) -> BreuilStatus {
    guard(|| store(out, deref(f, "f")?.0.is_zero(), "out"))
}

/// Copies the source (`which = 0`) or target (any other value) of `f`.
#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_endpoint(
    f: *const BreuilMorphism,
    which: u32,
    out: *mut *mut BreuilModule,
) -> BreuilStatus {
    guard(|| {
        let f = &deref(f, "f")?.0;
        store_module(out, if which == 0 { f.source() } else { f.target() }.clone())
    })
}

/// Kernel object and its inclusion. Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_kernel(
    f: *const BreuilMorphism,
    object: *mut *mut BreuilModule,
    inclusion: *mut *mut BreuilMorphism,
) -> BreuilStatus {
    guard(|| {
        let (k, incl) = kernel(&deref(f, "f")?.0)?;
        write_pair(object, k, inclusion, incl)
    })
}

/// Cokernel object and its projection. Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_cokernel(
    f: *const BreuilMorphism,
    object: *mut *mut BreuilModule,
    projection: *mut *mut BreuilMorphism,
) -> BreuilStatus {
    guard(|| {
        let (q, proj) = cokernel(&deref(f, "f")?.0)?;
        write_pair(object, q, projection, proj)
    })
}

/// Image object and its inclusion into the target. Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn breuil_morphism_image(
    f: *const BreuilMorphism,
    object: *mut *mut BreuilModule,
    inclusion: *mut *mut BreuilMorphism,
) -> BreuilStatus {
    guard(|| {
        let im = image(&deref(f, "f")?.0)?;
        write_pair(object, im.image, inclusion, im.mono)
    })
}

unsafe fn write_pair(
    object: *mut *mut BreuilModule,
    m: PhiModule,
    map: *mut *mut BreuilMorphism,
    f: PhiMorphism,
) -> Outcome {
    if !object.is_null() {
        store_module(object, m)?;
    }
    if !map.is_null() {
        store_morphism(map, f, "map")?;
    }
    Ok(())
}
