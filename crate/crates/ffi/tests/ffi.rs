use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use schwarz_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { sz_string_free(p) };
    s
}

fn last_error() -> String {
    let p = sz_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn form(name: &str, order: i64) -> *mut SzSeries {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { sz_form(name.as_ptr(), order, 0, &mut s) },
        SzStatus::Ok
    );
    s
}

#[test]
fn expands_e4() {
    let s = form("E4", 4);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { sz_series_to_string(s, &mut text) }, SzStatus::Ok);
    assert_eq!(
        take_string(text),
        "1 + 240 q + 2160 q^2 + 6720 q^3 + O(q^4)"
    );
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sz_series_to_json(s, &mut json) }, SzStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["coeffs"][1], "240/1");
    unsafe { sz_series_free(s) };
}

#[test]
fn jacobi_identity_through_handles() {
    let (t2, t3, t4) = (form("theta2", 30), form("theta3", 30), form("theta4", 30));
    let four = CString::new("4").unwrap();
    let pow4 = |s: *mut SzSeries| {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sz_series_pow(s, four.as_ptr(), 0, &mut out) },
            SzStatus::Ok
        );
        out
    };
    let (a, b, c) = (pow4(t2), pow4(t3), pow4(t4));
    let mut sum = ptr::null_mut();
    let mut diff = ptr::null_mut();
    unsafe {
        assert_eq!(
            sz_series_binary(a, b'+' as c_char, c, &mut sum),
            SzStatus::Ok
        );
        assert_eq!(
            sz_series_binary(b, b'-' as c_char, sum, &mut diff),
            SzStatus::Ok
        );
    }
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { sz_series_to_string(diff, &mut text) },
        SzStatus::Ok
    );
    // nothing survives; the truncation is pessimistic about θ₂ = 2q^(1/8)(…)
    assert_eq!(take_string(text), "O(q^(59/2))");
    for s in [t2, t3, t4, a, b, c, sum, diff] {
        unsafe { sz_series_free(s) };
    }
}

#[test]
fn schwarzian_and_fit() {
    let t = form("t_haupt", 40);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sz_schwarzian(t, &mut s) }, SzStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sz_fit(s, 20, &mut json) }, SzStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["coeff_theta2_8"], "1/36");
    assert_eq!(v["coeff_phi4"], "1/9");
    assert_eq!(v["residual_ok"], true);
    unsafe {
        sz_series_free(s);
        sz_series_free(t);
    }
}

#[test]
fn classify_and_cosets() {
    let (a, b) = (CString::new("1/9").unwrap(), CString::new("1/36").unwrap());
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { sz_classify(a.as_ptr(), b.as_ptr(), &mut json) },
        SzStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["exists"], true);
    assert_eq!(v["group"]["family"], "A4");

    let rel = CString::new("a^5, (ba)^3").unwrap();
    let mut order = 0usize;
    assert_eq!(
        unsafe { sz_coset_enumerate(rel.as_ptr(), 1000, &mut order) },
        SzStatus::Ok
    );
    assert_eq!(order, 60);

    let infinite = CString::new("a^2 b a^-2 b").unwrap();
    let st = unsafe { sz_coset_enumerate(infinite.as_ptr(), 200, &mut order) };
    assert_eq!(st, SzStatus::Enumeration);
    assert!(last_error().contains("200"));
}

#[test]
fn verify_record() {
    let id = CString::new("lambda-schwarz").unwrap();
    let mut passed = -1;
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { sz_verify(id.as_ptr(), 0, &mut passed, &mut json) },
        SzStatus::Ok
    );
    assert_eq!(passed, 1);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["order"], 50);

    let missing = CString::new("no-such-record").unwrap();
    let st = unsafe { sz_verify(missing.as_ptr(), 0, &mut passed, &mut json) };
    assert_eq!(st, SzStatus::NotFound);
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    let bad = CString::new("E5").unwrap();
    assert_eq!(
        unsafe { sz_form(bad.as_ptr(), 10, 0, &mut s) },
        SzStatus::Parse
    );
    assert!(last_error().contains("E5"));
    assert!(s.is_null());

    assert_eq!(
        unsafe { sz_form(ptr::null(), 10, 0, &mut s) },
        SzStatus::NullPointer
    );

    let e4 = CString::new("E4").unwrap();
    assert_eq!(
        unsafe { sz_form(e4.as_ptr(), 10, 8, &mut s) },
        SzStatus::InvalidArgument
    );

    let x = form("E4", 10);
    let y = form("lambda", 10);
    let mut z = ptr::null_mut();
    assert_eq!(
        unsafe { sz_series_binary(x, b'%' as c_char, y, &mut z) },
        SzStatus::InvalidArgument
    );

    let mut c = ptr::null_mut();
    let name = CString::new("E4").unwrap();
    assert_eq!(
        unsafe { sz_form(name.as_ptr(), 10, 128, &mut c) },
        SzStatus::Ok
    );
    assert_eq!(
        unsafe { sz_series_binary(x, b'*' as c_char, c, &mut z) },
        SzStatus::BackendMismatch
    );

    // a successful call clears the error
    assert_eq!(
        unsafe { sz_series_binary(x, b'*' as c_char, y, &mut z) },
        SzStatus::Ok
    );
    assert!(sz_last_error().is_null());
    unsafe {
        for s in [x, y, z, c] {
            sz_series_free(s);
        }
        sz_series_free(ptr::null_mut());
        sz_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn have(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().is_ok()
}

#[test]
fn header_links_from_c() {
    if !have("cc") {
        eprintln!("cc not found; skipping");
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = target_dir().join("libschwarz_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("schwarz-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "schwarz.h"
int main(void) {
    SzSeries *s = NULL;
    char *text = NULL;
    if (sz_form("E4", 3, 0, &s) != SZ_STATUS_OK) return 1;
    if (sz_series_to_string(s, &text) != SZ_STATUS_OK) return 2;
    int ok = strcmp(text, "1 + 240 q + 2160 q^2 + O(q^3)") == 0;
    sz_string_free(text);
    sz_series_free(s);
    if (sz_form("nope", 3, 0, &s) != SZ_STATUS_PARSE) return 3;
    if (sz_last_error() == NULL) return 4;
    size_t order = 0;
    if (sz_coset_enumerate("a^3, (ba)^3", 100, &order) != SZ_STATUS_OK || order != 12) return 5;
    return ok ? 0 : 6;
}
"#,
    )
    .unwrap();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let run = Command::new(&bin).status().unwrap();
    assert_eq!(run.code(), Some(0));
    let _ = std::fs::remove_dir_all(&dir);
}
