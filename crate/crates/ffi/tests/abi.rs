use std::ffi::{CStr, CString};
use std::ptr;

use poincare_ffi::*;

const DIHEDRAL: &str = include_str!("../../core/tests/data/dihedral3.json");
const PERTURBED: &str = include_str!("../../core/tests/data/dihedral3_perturbed.json");

fn last_error() -> String {
    let p = poincare_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn load(src: &str) -> (PoincareStatus, *mut PoincareDomain) {
    let json = CString::new(src).unwrap();
    let mut d = ptr::null_mut();
    let s = unsafe { poincare_domain_from_json(json.as_ptr(), &mut d) };
    (s, d)
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { poincare_string_free(p) };
    s
}

#[test]
fn present_round_trip() {
    let (s, d) = load(DIHEDRAL);
    assert_eq!(s, PoincareStatus::Ok);
    unsafe {
        assert_eq!(poincare_generator_count(d), 2);
        assert_eq!(poincare_relation_count(d), 3);

        let mut out = ptr::null_mut();
        assert_eq!(poincare_present(d, PoincareFormat::Gap, &mut out), PoincareStatus::Ok);
        let gap = take(out);
        assert!(gap.contains("rels := [a^2, b^2, (a*b)^3];;"), "{gap}");

        assert_eq!(poincare_present(d, PoincareFormat::Json, &mut out), PoincareStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["relations"].as_array().unwrap().len(), 3);

        let mut passed = false;
        assert_eq!(poincare_verify(d, 200, &mut passed), PoincareStatus::Ok);
        assert!(passed);

        let w = CString::new("a*b*a").unwrap();
        assert_eq!(poincare_factor(d, w.as_ptr(), 7, &mut out), PoincareStatus::Ok);
        assert!(!take(out).is_empty());

        poincare_domain_free(d);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let (s, d) = load(PERTURBED);
    assert_eq!(s, PoincareStatus::Validation);
    assert!(d.is_null());
    assert!(last_error().starts_with("PAIRING_MISMATCH"));

    let (s, d) = load("{not json");
    assert_eq!(s, PoincareStatus::Parse);
    assert!(d.is_null());

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { poincare_domain_from_json(ptr::null(), &mut d) }, PoincareStatus::NullPointer);

    let bad = [0xffu8, 0];
    assert_eq!(unsafe { poincare_domain_from_json(bad.as_ptr().cast(), &mut d) }, PoincareStatus::InvalidUtf8);
}

#[test]
fn unknown_generator_in_factor_word() {
    let (_, d) = load(DIHEDRAL);
    let w = CString::new("q").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { poincare_factor(d, w.as_ptr(), 0, &mut out) }, PoincareStatus::Validation);
    assert!(out.is_null());
    unsafe { poincare_domain_free(d) };
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        poincare_domain_free(ptr::null_mut());
        poincare_string_free(ptr::null_mut());
        assert_eq!(poincare_generator_count(ptr::null()), 0);
        let mut out = ptr::null_mut();
        assert_eq!(poincare_present(ptr::null(), PoincareFormat::Gap, &mut out), PoincareStatus::NullPointer);
    }
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/poincare.h");
    for f in ["poincare_domain_from_json", "poincare_present", "poincare_factor", "poincare_verify", "poincare_last_error"] {
        assert!(h.contains(f), "{f}");
    }
}
