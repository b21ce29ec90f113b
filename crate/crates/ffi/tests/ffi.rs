use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use omori_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = omori_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn growth(spec: &str, hi: f64) -> *mut OmoriGrowth {
    let mut g = ptr::null_mut();
    let s = cstr(spec);
    assert_eq!(unsafe { omori_growth_new(s.as_ptr(), hi, 1000, &mut g) }, OmoriStatus::Ok);
    g
}

#[test]
fn function_round_trip() {
    let mut f = ptr::null_mut();
    let s = cstr("(1+t)^2");
    unsafe {
        assert_eq!(omori_function_new(s.as_ptr(), 10.0, &mut f), OmoriStatus::Ok);
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        assert_eq!(omori_function_eval(f, 1.0, &mut v, &mut d1, &mut d2), OmoriStatus::Ok);
        assert_eq!((v, d1, d2), (4.0, 4.0, 2.0));
        omori_function_free(f);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut f = ptr::null_mut();
    let s = cstr("1+*t");
    assert_eq!(unsafe { omori_function_new(s.as_ptr(), 1.0, &mut f) }, OmoriStatus::ParseError);
    assert!(f.is_null());
    assert!(last_error().contains("offset 2"), "{}", last_error());

    assert_eq!(unsafe { omori_function_new(ptr::null(), 1.0, &mut f) }, OmoriStatus::InvalidArgument);

    let g = growth("1+t", 50.0);
    let mut v = OmoriViolationSummary::default();
    assert_eq!(unsafe { omori_counterexample(g, 2, 50.0, 0, &mut v) }, OmoriStatus::Precondition);
    assert_eq!(last_error(), "integral of 1/G diverges (declared)");
    unsafe { omori_growth_free(g) };

    let bad = growth("1-t", 5.0);
    assert!(!unsafe { omori_growth_is_admissible(bad) });
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { omori_slowdown_build(bad, 5.0, true, &mut h) }, OmoriStatus::PropertyViolation);
    unsafe { omori_growth_free(bad) };
}

#[test]
fn slowdown_and_counterexample() {
    let g = growth("(1+t)^2", 50.0);
    unsafe {
        let (mut verdict, mut integral) = (OmoriVerdict::Inconclusive, 0.0);
        assert_eq!(omori_growth_classify(g, 50.0, &mut verdict, &mut integral), OmoriStatus::Ok);
        assert_eq!(verdict, OmoriVerdict::ConvergesDeclared);
        assert!((integral - 50.0 / 51.0).abs() < 1e-10);

        let mut h = ptr::null_mut();
        assert_eq!(omori_slowdown_build(g, 50.0, false, &mut h), OmoriStatus::Ok);
        let mut s = OmoriSplice::default();
        assert_eq!(omori_slowed_splice(h, 0, &mut s), OmoriStatus::Ok);
        assert!((s.s_n - (4f64.cbrt() - 1.0)).abs() < 1e-8);
        let mut ok = false;
        assert_eq!(omori_slowed_check(h, 10_000, &mut ok), OmoriStatus::Ok);
        assert!(ok);
        let (mut v, mut dv) = (0.0, 0.0);
        assert_eq!(omori_slowed_eval(h, 1.0, &mut v, &mut dv), OmoriStatus::Ok);
        assert_eq!((v, dv), (1.0, 1.0));
        omori_slowed_free(h);

        let mut report = OmoriViolationSummary::default();
        assert_eq!(omori_counterexample(g, 2, 50.0, 0, &mut report), OmoriStatus::Ok);
        assert!((report.h_sup - 2.6962).abs() < 1e-4);
        assert!(report.violated);
        omori_growth_free(g);
    }
}

#[test]
fn geometry_entry_points() {
    let two = growth("2", 100.0);
    let one = growth("1", 10.0);
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            omori_manifold_new(OmoriWarpingKind::Hyperbolic, 2, 100.0, ptr::null(), &mut m),
            OmoriStatus::Ok
        );
        let (mut dr, mut ric) = (0.0, 0.0);
        assert_eq!(omori_manifold_radial(m, 1.0, &mut dr, &mut ric), OmoriStatus::Ok);
        assert!((dr - 1.0 / 1f64.tanh()).abs() < 1e-12);
        assert!((ric + 1.0).abs() < 1e-12);

        let mut test = ptr::null_mut();
        let src = cstr("-1/(1+t)");
        assert_eq!(omori_function_new(src.as_ptr(), 100.0, &mut test), OmoriStatus::Ok);
        let mut cert = OmoriCertificate::default();
        assert_eq!(omori_sweep(m, test, 0.0, two, 0.1, 100.0, &mut cert), OmoriStatus::Ok);
        assert!((cert.x_eps - 10.7082).abs() < 1e-3);
        assert!(cert.gap_ok && cert.lambda_ok && cert.gradient_ok && cert.laplacian_ok);
        assert_eq!(omori_sweep(m, test, 0.0, two, 0.9, 100.0, &mut cert), OmoriStatus::Precondition);

        let mut r = OmoriRiccatiSummary::default();
        let m0 = 1.0 / 0.1f64.tanh();
        assert_eq!(omori_riccati(one, 2, 0.1, m0, 10.0, &mut r), OmoriStatus::Ok);
        assert!((r.m_end - 1.0 / 10f64.tanh()).abs() < 1e-6);
        assert!(r.holds_from > 0.5f64.atanh());

        let mut custom = ptr::null_mut();
        let w = cstr("t*exp(t)");
        assert_eq!(omori_manifold_new_custom(w.as_ptr(), 3, 5.0, &mut custom), OmoriStatus::Ok);
        assert_eq!(omori_manifold_radial(custom, 0.0, &mut dr, &mut ric), OmoriStatus::Precondition);

        omori_manifold_free(custom);
        omori_function_free(test);
        omori_manifold_free(m);
        omori_growth_free(two);
        omori_growth_free(one);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        omori_function_free(ptr::null_mut());
        omori_growth_free(ptr::null_mut());
        omori_slowed_free(ptr::null_mut());
        omori_manifold_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/omori.h")).unwrap();
    for name in [
        "omori_last_error_message",
        "omori_function_new",
        "omori_growth_new",
        "omori_slowdown_build",
        "omori_manifold_new",
        "omori_riccati",
        "omori_sweep",
        "omori_counterexample",
        "typedef struct OmoriGrowth OmoriGrowth;",
        "OMORI_STATUS_PROPERTY_VIOLATION = 4",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libomori_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omori-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
