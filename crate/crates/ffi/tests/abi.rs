use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use xisp_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    xisp_string_free(s);
    out
}

fn last_error() -> String {
    let p = xisp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn vector_round_trip_and_tnorm() {
    unsafe {
        let json = CString::new(r#"{"entries": [["2", "1/2"], ["9", "-3"]]}"#).unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(xisp_vector_from_json(json.as_ptr(), &mut v), XispStatus::Ok);
        assert!(xisp_last_error().is_null());
        assert_eq!(xisp_vector_support_size(v), 2);
        let mut s = ptr::null_mut();
        assert_eq!(xisp_vector_to_json(v, &mut s), XispStatus::Ok);
        assert_eq!(take(s), r#"{"entries":[["2","1/2"],["9","-3"]]}"#);
        assert_eq!(xisp_tnorm(v, &mut s), XispStatus::Ok);
        assert_eq!(take(s), "3");
        xisp_vector_free(v);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut v = ptr::null_mut();
        let bad = CString::new(r#"{"entries": [["1", "1/0"]]}"#).unwrap();
        assert_eq!(xisp_vector_from_json(bad.as_ptr(), &mut v), XispStatus::MalformedInput);
        assert!(v.is_null());
        assert!(last_error().starts_with("malformed-input"));

        let mut s = ptr::null_mut();
        assert_eq!(xisp_tnorm(ptr::null(), &mut s), XispStatus::NullPointer);
        assert_eq!(last_error(), "null pointer: vector");

        let eps = CString::new("1/8").unwrap();
        assert_eq!(xisp_scc(3, eps.as_ptr(), 1, 1, &mut s), XispStatus::Infeasible);
        let name = CStr::from_ptr(xisp_status_name(XispStatus::Infeasible)).to_str().unwrap();
        assert!(last_error().starts_with(name));

        let zero = [0u64, 1];
        let mut member = true;
        assert_eq!(xisp_schreier_member(zero.as_ptr(), 2, 1, &mut member), XispStatus::MalformedInput);
    }
}

#[test]
fn registry_persists_codings() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("session.json").to_str().unwrap()).unwrap();
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(xisp_registry_open(path.as_ptr(), XispMode::Scaled, &mut r), XispStatus::Ok);
        let mut first = ptr::null_mut();
        assert_eq!(xisp_build_exact_pair(r, 2, 1, 2, &mut first), XispStatus::Ok);
        let first = take(first);
        assert_eq!(xisp_registry_save(r, path.as_ptr()), XispStatus::Ok);
        xisp_registry_free(r);

        let mut r = ptr::null_mut();
        assert_eq!(xisp_registry_open(path.as_ptr(), XispMode::Scaled, &mut r), XispStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(xisp_build_exact_pair(r, 2, 1, 2, &mut again), XispStatus::Ok);
        assert_eq!(first, take(again));

        let v = CString::new(r#"{"entries": [["3", "1"], ["4", "1"]]}"#).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(xisp_vector_from_json(v.as_ptr(), &mut h), XispStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(xisp_norm_certificate(h, r, XispMode::Scaled, 4, 4, 16, &mut cert), XispStatus::Ok);
        let cert: serde_json::Value = serde_json::from_str(&take(cert)).unwrap();
        assert_eq!(cert["upper"], "1");
        xisp_vector_free(h);
        xisp_registry_free(r);
    }
}

#[test]
fn faithful_pairs_are_refused() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(xisp_registry_new(XispMode::Faithful, &mut r), XispStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(xisp_build_exact_pair(r, 2, 1, 2, &mut s), XispStatus::Infeasible);
        xisp_registry_free(r);
    }
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_against_the_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libxisp_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
