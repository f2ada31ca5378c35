use std::ffi::{CStr, CString};
use std::ptr;
use subshift_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn shift(name: &str) -> *mut SubshiftShift {
    let mut sh = ptr::null_mut();
    assert_eq!(subshift_shift_builtin(c(name).as_ptr(), &mut sh), SUBSHIFT_OK);
    sh
}

unsafe fn element(sh: *const SubshiftShift, expr: &str) -> *mut SubshiftElement {
    let mut x = ptr::null_mut();
    let code = subshift_element_parse(sh, c("Z").as_ptr(), false, c(expr).as_ptr(), &mut x);
    assert_eq!(code, SUBSHIFT_OK, "{}", CStr::from_ptr(subshift_last_error()).to_str().unwrap());
    x
}

unsafe fn render(x: *const SubshiftElement) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(subshift_element_to_string(x, &mut s), SUBSHIFT_OK);
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    subshift_string_free(s);
    out
}

#[test]
fn language_and_products() {
    unsafe {
        let sh = shift("golden-mean");
        let mut m = false;
        assert_eq!(subshift_language_contains(sh, c("0101").as_ptr(), &mut m), SUBSHIFT_OK);
        assert!(m);
        assert_eq!(subshift_language_contains(sh, c("0110").as_ptr(), &mut m), SUBSHIFT_OK);
        assert!(!m);

        let a = element(sh, "st(1)");
        let b = element(sh, "s(1)");
        let mut p = ptr::null_mut();
        assert_eq!(subshift_element_mul(a, b, &mut p), SUBSHIFT_OK);
        assert_eq!(render(p), "p(C(1,_))");

        let mut q = ptr::null_mut();
        assert_eq!(subshift_element_star(b, &mut q), SUBSHIFT_OK);
        let mut eq = false;
        assert_eq!(subshift_element_equal(q, a, &mut eq), SUBSHIFT_OK);
        assert!(eq);

        let mut s = ptr::null_mut();
        assert_eq!(subshift_element_add(p, p, &mut s), SUBSHIFT_OK);
        assert_eq!(render(s), "2*p(C(1,_))");

        for x in [a, b, p, q, s] {
            subshift_element_free(x);
        }
        subshift_shift_free(sh);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut sh = ptr::null_mut();
        assert_eq!(subshift_shift_builtin(c("nowhere").as_ptr(), &mut sh), SUBSHIFT_UNKNOWN_SHIFT);
        assert!(sh.is_null());
        assert_eq!(subshift_shift_builtin(ptr::null(), &mut sh), SUBSHIFT_NULL_POINTER);
        assert_eq!(subshift_shift_builtin(c("even").as_ptr(), ptr::null_mut()), SUBSHIFT_NULL_POINTER);

        let g = shift("golden-mean");
        let mut x = ptr::null_mut();
        assert_eq!(subshift_element_parse(g, c("Z").as_ptr(), false, c("s(0").as_ptr(), &mut x), SUBSHIFT_PARSE_ERROR);
        let msg = CStr::from_ptr(subshift_last_error()).to_str().unwrap();
        assert!(msg.contains("parse error"), "{msg}");

        let t = shift("fan-loop");
        assert_eq!(subshift_element_parse(t, c("Z").as_ptr(), true, c("1").as_ptr(), &mut x), SUBSHIFT_PARSE_ERROR);

        let e = shift("even");
        let (a, b) = (element(g, "s(0)"), element(e, "s(0)"));
        let mut p = ptr::null_mut();
        assert_eq!(subshift_element_mul(a, b, &mut p), SUBSHIFT_MISMATCH);

        let mut q = ptr::null_mut();
        let z = element(g, "s(0)");
        let mut y = ptr::null_mut();
        assert_eq!(subshift_element_parse(g, c("Q").as_ptr(), false, c("s(0)").as_ptr(), &mut y), SUBSHIFT_OK);
        assert_eq!(subshift_element_add(z, y, &mut q), SUBSHIFT_MISMATCH);

        for x in [a, b, z, y] {
            subshift_element_free(x);
        }
        subshift_element_free(ptr::null_mut());
        for s in [g, t, e] {
            subshift_shift_free(s);
        }
    }
}

#[test]
fn config_and_suite() {
    unsafe {
        let cfg = c("[[shift]]\nkind = \"forbidden_words\"\nname = \"g\"\nsymbols = [\"a\", \"b\"]\nforbidden = [\"bb\"]\n");
        let mut sh = ptr::null_mut();
        assert_eq!(subshift_shift_from_config(cfg.as_ptr(), c("g").as_ptr(), &mut sh), SUBSHIFT_OK);
        let mut failed = usize::MAX;
        assert_eq!(subshift_relation_suite(sh, c("Z").as_ptr(), 2, 5, &mut failed), SUBSHIFT_OK);
        assert_eq!(failed, 0);
        subshift_shift_free(sh);
        let bad = c("colour = 1\n");
        assert_eq!(subshift_shift_from_config(bad.as_ptr(), c("g").as_ptr(), &mut sh), SUBSHIFT_CONFIG_ERROR);
    }
}

#[test]
fn header_lists_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/subshift.h")).unwrap();
    for name in [
        "typedef struct SubshiftShift SubshiftShift",
        "typedef struct SubshiftElement SubshiftElement",
        "subshift_element_mul",
        "subshift_last_error",
        "#define SUBSHIFT_PARSE_ERROR 3",
    ] {
        assert!(h.contains(name), "{name}");
    }
}
