//! C interface to `zerosum`.
//!
//! Groups and sequences cross the boundary as opaque handles owned by the
//! caller and released with their `_free` function. Every call returns a
//! [`ZsStatus`]; on failure [`zs_last_error`] describes what went wrong on the
//! calling thread. Strings handed out by the library are freed with
//! [`zs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zerosum::invariants::{self, EnumOptions};
use zerosum::product::{self, verify_witness_line, SearchConfig};
use zerosum::theorem::{find_big_product_one, FamilyGroup, PipelineOptions};
use zerosum::{text, Error, GroupSpec, Sequence};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Infeasible = 6,
    ClaimViolation = 7,
    Panic = 8,
}

/// A group `C_n` or `C_n ⋊_s C_2`.
pub struct ZsGroup(GroupSpec);

/// A finite multiset over a group.
pub struct ZsSequence(Sequence);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ZsStatus {
    match e {
        Error::Parse { .. } => ZsStatus::Parse,
        Error::BudgetExceeded { .. } => ZsStatus::BudgetExceeded,
        Error::InfeasibleSize { .. } | Error::LengthCapExceeded { .. } => ZsStatus::Infeasible,
        Error::ClaimViolation(_) => ZsStatus::ClaimViolation,
        _ => ZsStatus::InvalidArgument,
    }
}

struct Fail(ZsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status plus the last-error text.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ZsStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            ZsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ZsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ZsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(ZsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(ZsStatus::NullPointer, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn search(budget: u64) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if budget > 0 {
        cfg.budget = budget;
    }
    cfg
}

/// Message for the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn zs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a group literal such as `metacyclic n=15 s=11` or `cyclic n=7`.
///
/// # Safety
/// `literal` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_group_parse(literal: *const c_char, out: *mut *mut ZsGroup) -> ZsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = text::parse_group(str_arg(literal, "literal")?)?;
        *out = Box::into_raw(Box::new(ZsGroup(g)));
        Ok(())
    })
}

/// Group order, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle from [`zs_group_parse`].
#[no_mangle]
pub unsafe extern "C" fn zs_group_order(group: *const ZsGroup) -> u32 {
    group.as_ref().map_or(0, |g| g.0.order() as u32)
}

/// # Safety
/// `group` must be null or a handle from [`zs_group_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zs_group_free(group: *mut ZsGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Parses sequence file text: a `group` line and a `seq` line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zs_sequence_parse(text: *const c_char, out: *mut *mut ZsSequence) -> ZsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = text::parse_sequence_file(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(ZsSequence(s)));
        Ok(())
    })
}

/// Number of terms counted with multiplicity, or 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle from [`zs_sequence_parse`].
#[no_mangle]
pub unsafe extern "C" fn zs_sequence_len(seq: *const ZsSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `seq` must be null or a handle from [`zs_sequence_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zs_sequence_free(seq: *mut ZsSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Looks for a product-one subsequence of length `k`. Sets `*found`, and when
/// one exists and `witness` is non-null stores its witness line there. A
/// `budget` of 0 keeps the default.
///
/// # Safety
/// `seq` must be a live handle, `found` writable, `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn zs_has_product_one(
    seq: *const ZsSequence,
    k: usize,
    budget: u64,
    found: *mut bool,
    witness: *mut *mut c_char,
) -> ZsStatus {
    guard(|| {
        let s = ref_arg(seq, "seq")?;
        let found = out_arg(found, "found")?;
        if let Some(w) = witness.as_mut() {
            *w = ptr::null_mut();
        }
        let hit = product::has_product_one(&s.0, k, &search(budget))?;
        *found = hit.is_some();
        if let (Some(hit), Some(w)) = (hit, witness.as_mut()) {
            *w = c_string(hit.to_line());
        }
        Ok(())
    })
}

/// Checks a `witness k=.. target=.. : ..` line against `seq`. A rejected
/// witness is not an error: `*valid` is false and [`zs_last_error`] gives the
/// reason.
///
/// # Safety
/// `seq` must be a live handle, `line` NUL-terminated and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_verify_witness(seq: *const ZsSequence, line: *const c_char, valid: *mut bool) -> ZsStatus {
    let mut reason = None;
    let status = guard(|| {
        let s = ref_arg(seq, "seq")?;
        let valid = out_arg(valid, "valid")?;
        let w = text::parse_witness_line(s.0.group(), str_arg(line, "line")?)?;
        match verify_witness_line(&s.0, &w) {
            Ok(()) => *valid = true,
            Err(why) => {
                *valid = false;
                reason = Some(why.to_string());
            }
        }
        Ok(())
    });
    if let Some(r) = reason {
        set_error(&r);
    }
    status
}

/// The Gao constant of `group` by exhaustive enumeration. Large groups give
/// [`ZsStatus::Infeasible`].
///
/// # Safety
/// `group` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_gao_constant(group: *const ZsGroup, value: *mut usize) -> ZsStatus {
    guard(|| {
        let g = ref_arg(group, "group")?;
        let value = out_arg(value, "value")?;
        let r = invariants::gao_constant(&g.0, 4 * g.0.order(), &EnumOptions::default())?;
        *value = r.value;
        Ok(())
    })
}

/// A product-one subsequence of length `6n2` for a sequence of at least
/// `9n2` terms over a family group, written to `*witness` as a witness line.
///
/// # Safety
/// `seq` must be a live handle and `witness` writable.
#[no_mangle]
pub unsafe extern "C" fn zs_find_big_product_one(seq: *const ZsSequence, witness: *mut *mut c_char) -> ZsStatus {
    guard(|| {
        let s = ref_arg(seq, "seq")?;
        let witness = out_arg(witness, "witness")?;
        *witness = ptr::null_mut();
        let fam = FamilyGroup::new(s.0.group())?;
        let w = find_big_product_one(&fam, &s.0, &PipelineOptions::default())?;
        *witness = c_string(w.witness.to_line());
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
