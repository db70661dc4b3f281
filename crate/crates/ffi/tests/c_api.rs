use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use inner_dynamics_ffi::*;

fn z(re: f64, im: f64) -> IdComplex {
    IdComplex { re, im }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(id_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn family_handles_evaluate() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(id_family_new_sine(0.5, &mut h), IdStatus::Ok);
        let (mut v, mut d) = (z(0.0, 0.0), z(0.0, 0.0));
        assert_eq!(id_family_eval(h, z(1.0, 0.0), &mut v, &mut d), IdStatus::Ok);
        assert!((v.re - 0.5 * 1f64.sin()).abs() < 1e-15 && v.im == 0.0);
        assert!((d.re - 0.5 * 1f64.cos()).abs() < 1e-15);
        id_family_free(h);

        let json = CString::new(r#"{"family": "exp-lambda", "lambda": [0.25, 0.0]}"#).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(id_family_from_json(json.as_ptr(), &mut h), IdStatus::Ok, "{}", last_error());
        assert_eq!(id_family_eval(h, z(0.0, 0.0), &mut v, ptr::null_mut()), IdStatus::Ok);
        assert!((v.re - 0.25).abs() < 1e-15);
        id_family_free(h);
    }
}

#[test]
fn invalid_arguments_report_status_and_message() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(id_family_new_sine(2.0, &mut h), IdStatus::InvalidArgument);
        assert!(h.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(id_family_new_sine(0.5, ptr::null_mut()), IdStatus::NullPointer);
        assert_eq!(id_family_eval(ptr::null(), z(0.0, 0.0), ptr::null_mut(), ptr::null_mut()), IdStatus::NullPointer);

        let bad = CString::new("{\"family\": \"nope\"}").unwrap();
        assert_eq!(id_family_from_json(bad.as_ptr(), &mut h), IdStatus::InvalidArgument);

        let zeros = [z(1.5, 0.0)];
        let mut b = ptr::null_mut();
        assert_eq!(id_blaschke_new(0.0, zeros.as_ptr(), 1, &mut b), IdStatus::InvalidArgument);

        // freeing null is a no-op
        id_family_free(ptr::null_mut());
        id_report_free(ptr::null_mut());
        id_string_free(ptr::null_mut());
    }
}

#[test]
fn blaschke_and_inner_handles() {
    unsafe {
        let zeros = [z(0.3, 0.1), z(-0.2, 0.4)];
        let mut b = ptr::null_mut();
        assert_eq!(id_blaschke_new(0.7, zeros.as_ptr(), 2, &mut b), IdStatus::Ok);
        let mut w = z(0.0, 0.0);
        assert_eq!(id_blaschke_eval(b, zeros[0], &mut w), IdStatus::Ok);
        assert!(w.re.hypot(w.im) < 1e-15);
        let t = 1.234f64;
        assert_eq!(id_blaschke_eval(b, z(t.cos(), t.sin()), &mut w), IdStatus::Ok);
        assert!((w.re.hypot(w.im) - 1.0).abs() < 1e-14);
        id_blaschke_free(b);

        let mut g = ptr::null_mut();
        assert_eq!(id_inner_exponential_form(1.0, 0.0, &mut g), IdStatus::Ok);
        assert_eq!(id_inner_eval(g, z(0.0, 0.0), &mut w), IdStatus::Ok);
        assert!((w.re - (-1f64).exp()).abs() < 1e-15 && w.im.abs() < 1e-15);
        assert_eq!(id_inner_eval(g, z(-1.0, 0.0), &mut w), IdStatus::InvalidArgument);
        id_inner_free(g);
    }
}

#[test]
fn tangent_classification_and_sine_parameters() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(id_tan_new(1.0, 0.0, &mut h), IdStatus::Ok);
        let mut class = IdFixedPointClass::Repelling;
        let (mut loc, mut m) = (z(9.0, 9.0), z(9.0, 9.0));
        assert_eq!(id_tan_classify(h, &mut class, &mut loc, &mut m), IdStatus::Ok, "{}", last_error());
        assert_eq!(class, IdFixedPointClass::Parabolic);
        assert!(loc.re.hypot(loc.im) < 1e-8);
        assert!((m.re - 1.0).abs() < 1e-8);
        id_tan_free(h);

        let (mut lam, mut tau) = (0.0, 0.0);
        assert_eq!(id_sine_lambda_of_tau(3.0, &mut lam), IdStatus::Ok);
        assert_eq!(id_sine_tau_of_lambda(lam, &mut tau), IdStatus::Ok);
        assert!(lam > 0.0 && lam < 1.0);
        assert!((tau - 3.0).abs() < 1e-9);
        assert_eq!(id_sine_lambda_of_tau(0.5, &mut lam), IdStatus::InvalidArgument);
    }
}

#[test]
fn verify_reports_round_trip_as_json() {
    unsafe {
        let name = CString::new("topfer").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(id_verify(name.as_ptr(), f64::NAN, &mut r), IdStatus::Ok);
        assert_eq!(id_report_all_pass(r), 1);
        assert!(id_report_row_count(r) > 5);
        let s = id_report_json(r);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert!(json["rows"].is_array());
        id_string_free(s);
        id_report_free(r);

        let bad = CString::new("nonsense").unwrap();
        assert_eq!(id_verify(bad.as_ptr(), f64::NAN, &mut r), IdStatus::InvalidArgument);
        let lam0 = CString::new("lambda0").unwrap();
        assert_eq!(id_verify(lam0.as_ptr(), 2.5, &mut r), IdStatus::InvalidArgument);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(id_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles as C when a compiler is available.
#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/inner_dynamics.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for sym in ["id_family_eval", "id_verify", "id_report_json", "IdStatus", "IdComplex"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"inner_dynamics.h\"\nint main(void) { IdFamily *h = 0; IdStatus s = id_family_new_sine(0.5, &h); id_family_free(h); return (int)s; }\n",
    )
    .unwrap();
    let out = match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
    {
        Ok(o) => o,
        Err(_) => {
            eprintln!("no C compiler; skipping");
            return;
        }
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
