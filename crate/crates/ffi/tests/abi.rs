use std::ffi::{c_char, CStr, CString};
use std::ptr;

use conformal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    conformal_string_free(s);
    out
}

unsafe fn construct(p: u32, q: u32, k: u32, lambda: &str, mu: &str) -> (ConformalStatus, *mut ConformalOperator) {
    let mut op = ptr::null_mut();
    let status = conformal_operator_construct(p, q, k, c(lambda).as_ptr(), c(mu).as_ptr(), &mut op);
    (status, op)
}

#[test]
fn construct_query_and_free() {
    unsafe {
        let (status, op) = construct(2, 0, 1, "1/4", "1/4");
        assert_eq!(status, ConformalStatus::Ok);
        assert!(conformal_last_error_message().is_null());

        let mut k = 0;
        assert_eq!(conformal_operator_k(op, &mut k), ConformalStatus::Ok);
        assert_eq!(k, 1);

        let mut s = ptr::null_mut();
        assert_eq!(conformal_operator_coefficient(op, 1, 0, 0, &mut s), ConformalStatus::Ok);
        assert_eq!(take(s), "-1/2");
        assert_eq!(conformal_operator_coefficient(op, 0, 1, 0, &mut s), ConformalStatus::Ok);
        assert_eq!(take(s), "1");
        assert_eq!(conformal_operator_coefficient(op, 3, 0, 0, &mut s), ConformalStatus::Ok);
        assert_eq!(take(s), "0");

        assert_eq!(conformal_operator_verify(op), ConformalStatus::Ok);
        conformal_operator_free(op);
    }
}

#[test]
fn json_round_trip_and_perturbed_weight() {
    unsafe {
        let (_, op) = construct(1, 1, 2, "2/7", "-1/5");
        let mut json = ptr::null_mut();
        assert_eq!(conformal_operator_to_json(op, &mut json), ConformalStatus::Ok);
        let json = take(json);
        conformal_operator_free(op);

        let mut back = ptr::null_mut();
        assert_eq!(conformal_operator_from_json(c(&json).as_ptr(), &mut back), ConformalStatus::Ok);
        assert_eq!(conformal_operator_verify(back), ConformalStatus::Ok);
        conformal_operator_free(back);

        let doc: String = json
            .lines()
            .map(|l| if l.contains("\"nu\"") { "  \"nu\": \"7\",".to_owned() } else { l.to_owned() })
            .collect::<Vec<_>>()
            .join("\n");
        let mut bad = ptr::null_mut();
        assert_eq!(conformal_operator_from_json(c(&doc).as_ptr(), &mut bad), ConformalStatus::Ok);
        assert_eq!(conformal_operator_verify(bad), ConformalStatus::NotInvariant);
        assert!(take(conformal_last_error_message()).contains("dilation"));
        conformal_operator_free(bad);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let (status, op) = construct(2, 0, 1, "0", "1/4");
        assert_eq!(status, ConformalStatus::Resonant);
        assert!(op.is_null());
        assert!(take(conformal_last_error_message()).contains("2+n(2λ-1)"));

        assert_eq!(construct(2, 0, 1, "0.25", "1/4").0, ConformalStatus::Parse);
        assert_eq!(construct(0, 0, 1, "1/3", "1/4").0, ConformalStatus::Parse);

        let mut op = ptr::null_mut();
        assert_eq!(
            conformal_operator_construct(2, 0, 1, ptr::null(), c("1").as_ptr(), &mut op),
            ConformalStatus::NullPointer
        );
        assert_eq!(conformal_operator_verify(ptr::null()), ConformalStatus::NullPointer);
        assert_eq!(conformal_operator_from_json(c("{").as_ptr(), &mut op), ConformalStatus::Parse);

        conformal_operator_free(ptr::null_mut());
        conformal_string_free(ptr::null_mut());
    }
}

#[test]
fn transvectant_coefficients_as_json() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(conformal_transvectant_json(1, c("1/2").as_ptr(), c("1/2").as_ptr(), &mut s), ConformalStatus::Ok);
        assert_eq!(take(s), "[\"1\", \"-1\"]");
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/conformal.h")).unwrap();
    for name in [
        "conformal_operator_construct",
        "conformal_operator_from_json",
        "conformal_operator_to_json",
        "conformal_operator_k",
        "conformal_operator_coefficient",
        "conformal_operator_verify",
        "conformal_operator_free",
        "conformal_transvectant_json",
        "conformal_last_error_message",
        "conformal_string_free",
        "typedef struct ConformalOperator ConformalOperator;",
        "CONFORMAL_STATUS_RESONANT = 3",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
