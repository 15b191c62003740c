use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use padset_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    padset_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(padset_last_error_message()).to_str().unwrap().to_owned()
}

unsafe fn set(json: &str) -> *mut PadsetSet {
    let mut out = ptr::null_mut();
    assert_eq!(padset_set_from_json(cstr(json).as_ptr(), &mut out), PadsetStatus::Ok);
    out
}

#[test]
fn set_round_trip_and_measure() {
    unsafe {
        let s = set(r#"{"p":2,"balls":[{"center":"0","radius_exp":-1},{"center":"1/2","radius_exp":0}]}"#);
        let mut m = ptr::null_mut();
        assert_eq!(padset_set_measure(s, &mut m), PadsetStatus::Ok);
        assert_eq!(take_string(m), "3/2");
        let mut js = ptr::null_mut();
        assert_eq!(padset_set_to_json(s, &mut js), PadsetStatus::Ok);
        let again = set(&take_string(js));
        let mut diff = ptr::null_mut();
        assert_eq!(padset_set_combine(s, again, PadsetSetOp::SymmetricDifference, &mut diff), PadsetStatus::Ok);
        let mut m = ptr::null_mut();
        padset_set_measure(diff, &mut m);
        assert_eq!(take_string(m), "0");
        padset_set_free(s);
        padset_set_free(again);
        padset_set_free(diff);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        let st = padset_set_from_json(cstr(r#"{"p":6,"balls":[]}"#).as_ptr(), &mut out);
        assert_eq!(st, PadsetStatus::NotPrime);
        assert!(last_error().contains("not prime"));
        assert!(out.is_null());
        let st = padset_set_from_json(cstr("{").as_ptr(), &mut out);
        assert_eq!(st, PadsetStatus::Parse);
        assert_eq!(padset_set_from_json(ptr::null(), &mut out), PadsetStatus::NullArgument);
        let a = set(r#"{"p":2,"balls":[]}"#);
        let b = set(r#"{"p":3,"balls":[]}"#);
        let mut u = ptr::null_mut();
        assert_eq!(padset_set_combine(a, b, PadsetSetOp::Union, &mut u), PadsetStatus::MixedPrimes);
        padset_set_free(a);
        padset_set_free(b);
        padset_set_free(ptr::null_mut());
        let mut c = 0u64;
        assert_eq!(padset_count_integers(ptr::null(), 0, 0, &mut c), PadsetStatus::NullArgument);
    }
}

#[test]
fn verification_through_handles() {
    unsafe {
        let zp = set(r#"{"p":3,"balls":[{"center":"0","radius_exp":0}]}"#);
        let mut r = ptr::null_mut();
        assert_eq!(padset_verify_scaling_set(zp, &mut r), PadsetStatus::Ok);
        assert_eq!(padset_report_verdict(r), PadsetVerdict::CertifiedNecessary);
        let mut text = ptr::null_mut();
        padset_report_render(r, false, &mut text);
        assert!(take_string(text).contains("[PASS] measure"));
        padset_report_free(r);

        let mut r = ptr::null_mut();
        assert_eq!(padset_verify_gss(zp, 2, &mut r), PadsetStatus::Ok);
        assert_eq!(padset_report_verdict(r), PadsetVerdict::CertifiedNecessary);
        let mut js = ptr::null_mut();
        padset_report_render(r, true, &mut js);
        assert!(take_string(js).contains("\"verdict\": \"certified-necessary\""));
        padset_report_free(r);

        let mut c = 0u64;
        assert_eq!(padset_count_integers(zp, 1, 2, &mut c), PadsetStatus::Ok);
        assert_eq!(c, 9);
        padset_set_free(zp);
    }
}

#[test]
fn families_and_multiwavelets() {
    unsafe {
        let mut g = ptr::null_mut();
        let mut order = 0u64;
        let mut pieces = ptr::null_mut();
        let st = padset_generate_family(PadsetFamily::KhrennikovShelkovich, 2, 2, &mut g, &mut order, &mut pieces);
        assert_eq!(st, PadsetStatus::Ok);
        assert_eq!(order, 2);
        let pieces = take_string(pieces);
        assert!(pieces.contains("1/4") && pieces.contains("3/4"), "{pieces}");
        padset_set_free(g);

        let w1 = set(r#"{"p":3,"balls":[{"center":"1/3","radius_exp":0}]}"#);
        let w2 = set(r#"{"p":3,"balls":[{"center":"2/3","radius_exp":0}]}"#);
        let handles = [w1 as *const PadsetSet, w2 as *const PadsetSet];
        let mut r = ptr::null_mut();
        assert_eq!(padset_verify_multiwavelet_set(handles.as_ptr(), 2, &mut r), PadsetStatus::Ok);
        assert_eq!(padset_report_verdict(r), PadsetVerdict::CertifiedNecessary);
        padset_report_free(r);
        let mut r = ptr::null_mut();
        assert_eq!(padset_verify_multiwavelet_set(ptr::null(), 0, &mut r), PadsetStatus::InvalidInput);
        padset_set_free(w1);
        padset_set_free(w2);

        let st = padset_generate_family(PadsetFamily::KhrennikovShelkovich, 2, 0, &mut g, &mut order, ptr::null_mut());
        assert_ne!(st, PadsetStatus::Ok);
    }
}

#[test]
fn functions_fourier_and_inner_product() {
    unsafe {
        let mut f = ptr::null_mut();
        let json = r#"{"p":2,"terms":[{"coef":"1","t":"1/2","ball":{"center":"0","radius_exp":0}}]}"#;
        assert_eq!(padset_function_from_json(cstr(json).as_ptr(), &mut f), PadsetStatus::Ok);
        let mut fh = ptr::null_mut();
        assert_eq!(padset_function_fourier(f, false, &mut fh), PadsetStatus::Ok);
        let mut js = ptr::null_mut();
        padset_function_to_json(fh, &mut js);
        assert!(take_string(js).contains("\"center\":\"1/2\""));

        let (mut re, mut im) = (f64::NAN, f64::NAN);
        let mut exact = ptr::null_mut();
        assert_eq!(padset_function_inner_product(f, f, &mut exact, &mut re, &mut im), PadsetStatus::Ok);
        assert_eq!((re, im), (1.0, 0.0));
        assert_eq!(take_string(exact), r#"{"order_exp":0,"coeffs":["1"]}"#);

        let w = set(r#"{"p":2,"balls":[{"center":"1/2","radius_exp":0}]}"#);
        let mut ind = ptr::null_mut();
        padset_function_indicator(w, &mut ind);
        let mut back = ptr::null_mut();
        padset_function_fourier(ind, true, &mut back);
        // ⟨ψ, 1̌_W⟩ = ‖ψ‖² since 1̌_W = ψ
        assert_eq!(padset_function_inner_product(f, back, ptr::null_mut(), &mut re, &mut im), PadsetStatus::Ok);
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        for h in [f, fh, ind, back] {
            padset_function_free(h);
        }
        padset_set_free(w);
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "padset.h"

int main(void) {
    PadsetSet *s = NULL;
    if (padset_set_from_json("{\"p\":2,\"balls\":[{\"center\":\"0\",\"radius_exp\":0}]}", &s) != PADSET_STATUS_OK) return 1;
    PadsetReport *r = NULL;
    if (padset_verify_gss(s, 1, &r) != PADSET_STATUS_OK) return 2;
    if (padset_report_verdict(r) != PADSET_VERDICT_CERTIFIED_NECESSARY) return 3;
    PadsetSet *bad = NULL;
    if (padset_set_from_json("{\"p\":4,\"balls\":[]}", &bad) != PADSET_STATUS_NOT_PRIME) return 4;
    if (strstr(padset_last_error_message(), "prime") == NULL) return 5;
    char *m = NULL;
    padset_set_measure(s, &m);
    printf("%s\n", m);
    padset_string_free(m);
    padset_report_free(r);
    padset_set_free(s);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("padset.h").exists(), "header generated by build.rs");
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = std::env::temp_dir().join(format!("padset-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let syntax = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    let lib = target_dir().join("libpadset_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built in this profile; link step skipped");
        return;
    }
    let exe = dir.join("main");
    let link = Command::new("cc")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1");
    let _ = std::fs::remove_dir_all(&dir);
}
