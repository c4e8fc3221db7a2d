use std::ffi::{CStr, CString};
use std::ptr;

use qcs_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qcs_string_free(s) };
    out
}

fn last_error() -> String {
    take(qcs_last_error_message())
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn run_json_reports() {
    let mut out = ptr::null_mut();
    let st = unsafe {
        qcs_run_json(
            c("coh total").as_ptr(),
            c(r#"{"factors":[2,2],"frob":[[1,0],[0,1]]}"#).as_ptr(),
            0,
            -1,
            &mut out,
        )
    };
    assert_eq!(st, QcsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["classes"], 8);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn run_json_errors() {
    let mut out = ptr::null_mut();
    let st = unsafe { qcs_run_json(c("coh total").as_ptr(), c("{").as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::ParseError);
    assert!(out.is_null());
    assert!(last_error().contains("parse"));

    let st = unsafe { qcs_run_json(c("coh nope").as_ptr(), c("{}").as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::UsageError);

    let lattice = r#"{"lattice":{"rank":1,"inertia":[[[-1]]],"frob":[[1]]},"ring":{"kind":"p-adic","p":3,"level":1}}"#;
    let st = unsafe { qcs_run_json(c("torus count").as_ptr(), c(lattice).as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::DomainError);
    assert!(last_error().contains("not split"));

    let st = unsafe { qcs_run_json(ptr::null(), c("{}").as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::NullPointer);
    let bad = [0xffu8, 0];
    let st = unsafe { qcs_run_json(bad.as_ptr().cast(), c("{}").as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::InvalidUtf8);
}

#[test]
fn invalid_sheaf_report_is_returned_with_domain_status() {
    let sheaf = r#"{"base":{"factors":[4],"frob":[[1]]},"a":{"1,1":"1/8"},"b":{}}"#;
    let mut out = ptr::null_mut();
    let st = unsafe { qcs_run_json(c("qc validate").as_ptr(), c(sheaf).as_ptr(), 0, -1, &mut out) };
    assert_eq!(st, QcsStatus::DomainError);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn handles() {
    let mut m = ptr::null_mut();
    let st = unsafe { qcs_model_from_json(c(r#"{"factors":[2,2],"frob":[[1,0],[0,1]]}"#).as_ptr(), &mut m) };
    assert_eq!(st, QcsStatus::Ok);
    let (mut n, mut k) = (0usize, 0u64);
    unsafe {
        assert_eq!(qcs_model_order(m, &mut n), QcsStatus::Ok);
        assert_eq!(qcs_model_class_count(m, &mut k), QcsStatus::Ok);
        qcs_model_free(m);
    }
    assert_eq!((n, k), (4, 8));

    let alt = r#"{"base":{"factors":[2,2],"frob":[[1,0],[0,1]]},"a":{"1,0,0,1":"1/2","1,0,1,1":"1/2","1,1,0,1":"1/2","1,1,1,1":"1/2"},"b":{}}"#;
    let unit = r#"{"base":{"factors":[2,2],"frob":[[1,0],[0,1]]},"a":{},"b":{}}"#;
    let (mut p, mut q) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(qcs_sheaf_from_json(c(unit).as_ptr(), &mut q), QcsStatus::Ok);
        let st = qcs_sheaf_from_json(c(alt).as_ptr(), &mut p);
        if st != QcsStatus::Ok {
            panic!("{}", last_error());
        }
        let (mut valid, mut iso) = (false, true);
        assert_eq!(qcs_sheaf_is_valid(p, &mut valid), QcsStatus::Ok);
        assert!(valid);
        assert_eq!(qcs_sheaf_is_isomorphic(p, q, &mut iso), QcsStatus::Ok);
        assert!(!iso);
        let mut s = ptr::null_mut();
        assert_eq!(qcs_sheaf_to_json(q, &mut s), QcsStatus::Ok);
        assert!(take(s).contains("\"a\""));
        assert_eq!(qcs_sheaf_is_valid(ptr::null(), &mut valid), QcsStatus::NullPointer);
        qcs_sheaf_free(p);
        qcs_sheaf_free(q);
        qcs_sheaf_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qcs.h")).unwrap();
    for name in [
        "qcs_run_json",
        "qcs_last_error_message",
        "qcs_string_free",
        "qcs_model_from_json",
        "qcs_sheaf_is_isomorphic",
        "QCS_STATUS_PANIC",
        "typedef struct QcsModel QcsModel",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
    let cc = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-"])
        .stdin(std::process::Stdio::piped())
        .spawn();
    if let Ok(mut child) = cc {
        use std::io::Write;
        let src = format!("#include <stdbool.h>\n{h}\nint main(void) {{ return 0; }}\n");
        child.stdin.take().unwrap().write_all(src.as_bytes()).unwrap();
        assert!(child.wait().unwrap().success(), "header does not compile as C");
    }
    let v = unsafe { CStr::from_ptr(qcs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
