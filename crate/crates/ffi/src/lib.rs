//! C interface. Shifts and algebra elements are opaque handles; every call
//! returns an integer status and writes results through out-pointers.
//! The message for the last failure on the calling thread is available from
//! `subshift_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use subshift::algebra::{Algebra, AlgebraElement};
use subshift::config::WorkbenchConfig;
use subshift::display::fmt_element;
use subshift::ring::Ring;
use subshift::sets::Flavor;
use subshift::shift::Shift;
use subshift::{fixtures, parse, relations, Error};

pub const SUBSHIFT_OK: i32 = 0;
pub const SUBSHIFT_NULL_POINTER: i32 = 1;
pub const SUBSHIFT_INVALID_UTF8: i32 = 2;
pub const SUBSHIFT_PARSE_ERROR: i32 = 3;
pub const SUBSHIFT_UNKNOWN_SHIFT: i32 = 4;
pub const SUBSHIFT_TOP_UNAVAILABLE: i32 = 5;
pub const SUBSHIFT_OUTSIDE_LANGUAGE: i32 = 6;
pub const SUBSHIFT_MISMATCH: i32 = 7;
pub const SUBSHIFT_CONFIG_ERROR: i32 = 8;
pub const SUBSHIFT_UNSUPPORTED: i32 = 9;
pub const SUBSHIFT_OTHER: i32 = 10;
pub const SUBSHIFT_PANIC: i32 = 11;

/// A subshift.
pub struct SubshiftShift {
    shift: Arc<Shift>,
}

/// An element of a subshift algebra, tied to the shift it was parsed in.
pub struct SubshiftElement {
    shift: Arc<Shift>,
    value: AlgebraElement,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownLetter(_) => SUBSHIFT_PARSE_ERROR,
        Error::TopUnavailable => SUBSHIFT_TOP_UNAVAILABLE,
        Error::OutsideLanguage(_) => SUBSHIFT_OUTSIDE_LANGUAGE,
        Error::RingMismatch => SUBSHIFT_MISMATCH,
        Error::Config(_) => SUBSHIFT_CONFIG_ERROR,
        Error::UnsupportedBackend(_) => SUBSHIFT_UNSUPPORTED,
        _ => SUBSHIFT_OTHER,
    }
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(code_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SUBSHIFT_OK,
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            SUBSHIFT_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SUBSHIFT_NULL_POINTER, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(SUBSHIFT_INVALID_UTF8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(SUBSHIFT_NULL_POINTER, "null handle".into()))
}

fn out<T>(p: *mut T) -> Result<*mut T, Fail> {
    if p.is_null() {
        Err(Fail(SUBSHIFT_NULL_POINTER, "null output pointer".into()))
    } else {
        Ok(p)
    }
}

fn boxed_shift(sh: Shift) -> *mut SubshiftShift {
    Box::into_raw(Box::new(SubshiftShift { shift: Arc::new(sh) }))
}

/// Message for the last failed call on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn subshift_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opens a builtin shift by name (`full-2-shift`, `golden-mean`, `even`, ...).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn subshift_shift_builtin(name: *const c_char, out_shift: *mut *mut SubshiftShift) -> i32 {
    guard(|| {
        let o = out(out_shift)?;
        let n = text(name)?;
        let sh = fixtures::by_name(n).ok_or_else(|| Fail(SUBSHIFT_UNKNOWN_SHIFT, format!("unknown shift `{n}`")))?;
        *o = boxed_shift(sh);
        Ok(())
    })
}

/// Builds the shift called `name` from a TOML workbench configuration.
///
/// # Safety
/// `config` and `name` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn subshift_shift_from_config(config: *const c_char, name: *const c_char, out_shift: *mut *mut SubshiftShift) -> i32 {
    guard(|| {
        let o = out(out_shift)?;
        let cfg = WorkbenchConfig::parse(text(config)?)?;
        let n = text(name)?;
        let spec = cfg.find_shift(n).ok_or_else(|| Fail(SUBSHIFT_UNKNOWN_SHIFT, format!("unknown shift `{n}`")))?;
        *o = boxed_shift(spec.build()?);
        Ok(())
    })
}

/// # Safety
/// `sh` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn subshift_shift_free(sh: *mut SubshiftShift) {
    if !sh.is_null() {
        drop(Box::from_raw(sh));
    }
}

/// Writes whether `word` is in the language of the shift.
///
/// # Safety
/// `sh` must be a live handle, `word` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_language_contains(sh: *const SubshiftShift, word: *const c_char, out_member: *mut bool) -> i32 {
    guard(|| {
        let o = out(out_member)?;
        let sh = &handle(sh)?.shift;
        let w = sh.parse_word(text(word)?)?;
        *o = sh.is_in_language(&w)?;
        Ok(())
    })
}

/// Parses an algebra expression over `ring` (`Z`, `Q` or `F<p>`), in the
/// top-free algebra when `top_free` is set.
///
/// # Safety
/// `sh` must be a live handle, `ring` and `expr` NUL-terminated strings and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_parse(
    sh: *const SubshiftShift,
    ring: *const c_char,
    top_free: bool,
    expr: *const c_char,
    out_element: *mut *mut SubshiftElement,
) -> i32 {
    guard(|| {
        let o = out(out_element)?;
        let shift = handle(sh)?.shift.clone();
        let ring = Ring::parse(text(ring)?)?;
        let flavor = if top_free { Flavor::B } else { Flavor::U };
        let value = parse::parse_element(&Algebra::new(&shift, ring, flavor), text(expr)?)?;
        *o = Box::into_raw(Box::new(SubshiftElement { shift, value }));
        Ok(())
    })
}

/// # Safety
/// `x` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_free(x: *mut SubshiftElement) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

unsafe fn binary(
    a: *const SubshiftElement,
    b: *const SubshiftElement,
    op: impl FnOnce(&Algebra, &AlgebraElement, &AlgebraElement) -> subshift::Result<AlgebraElement>,
    out_element: *mut *mut SubshiftElement,
) -> i32 {
    guard(|| {
        let o = out(out_element)?;
        let (a, b) = (handle(a)?, handle(b)?);
        if !Arc::ptr_eq(&a.shift, &b.shift) {
            return Err(Fail(SUBSHIFT_MISMATCH, "elements belong to different shifts".into()));
        }
        let alg = Algebra::new(&a.shift, a.value.ring, a.value.flavor);
        let value = op(&alg, &a.value, &b.value)?;
        *o = Box::into_raw(Box::new(SubshiftElement { shift: a.shift.clone(), value }));
        Ok(())
    })
}

/// Sum of two elements of the same algebra.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_add(
    a: *const SubshiftElement,
    b: *const SubshiftElement,
    out_element: *mut *mut SubshiftElement,
) -> i32 {
    binary(a, b, |alg, x, y| alg.add(x, y), out_element)
}

/// Product of two elements of the same algebra.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_mul(
    a: *const SubshiftElement,
    b: *const SubshiftElement,
    out_element: *mut *mut SubshiftElement,
) -> i32 {
    binary(a, b, |alg, x, y| alg.mul(x, y), out_element)
}

/// # Safety
/// `x` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_star(x: *const SubshiftElement, out_element: *mut *mut SubshiftElement) -> i32 {
    guard(|| {
        let o = out(out_element)?;
        let x = handle(x)?;
        let value = Algebra::new(&x.shift, x.value.ring, x.value.flavor).star(&x.value);
        *o = Box::into_raw(Box::new(SubshiftElement { shift: x.shift.clone(), value }));
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_equal(a: *const SubshiftElement, b: *const SubshiftElement, out_equal: *mut bool) -> i32 {
    guard(|| {
        let o = out(out_equal)?;
        let (a, b) = (handle(a)?, handle(b)?);
        if !Arc::ptr_eq(&a.shift, &b.shift) {
            return Err(Fail(SUBSHIFT_MISMATCH, "elements belong to different shifts".into()));
        }
        *o = Algebra::new(&a.shift, a.value.ring, a.value.flavor).equals(&a.value, &b.value)?;
        Ok(())
    })
}

/// Canonical text of an element. Release it with `subshift_string_free`.
///
/// # Safety
/// `x` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_element_to_string(x: *const SubshiftElement, out_text: *mut *mut c_char) -> i32 {
    guard(|| {
        let o = out(out_text)?;
        let x = handle(x)?;
        let s = fmt_element(&x.shift, &x.value);
        *o = CString::new(s).map_err(|_| Fail(SUBSHIFT_OTHER, "interior NUL".into()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from `subshift_element_to_string`. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn subshift_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the relation suite; `out_failed` receives the number of failing instances.
///
/// # Safety
/// `sh` must be a live handle, `ring` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn subshift_relation_suite(
    sh: *const SubshiftShift,
    ring: *const c_char,
    max_len: usize,
    window: usize,
    out_failed: *mut usize,
) -> i32 {
    guard(|| {
        let o = out(out_failed)?;
        let sh = &handle(sh)?.shift;
        let rep = relations::relation_suite(sh, Ring::parse(text(ring)?)?, max_len, window)?;
        *o = rep.checks.iter().map(|c| c.failed).sum();
        Ok(())
    })
}
