use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tvq_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    tvq_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = tvq_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn catalog(name: &str) -> *mut TvqTriangulation {
    let mut tri = ptr::null_mut();
    assert_eq!(
        tvq_triangulation_from_catalog(cstr(name).as_ptr(), &mut tri),
        TvqStatus::Ok
    );
    tri
}

#[test]
fn compute_rp3() {
    unsafe {
        let tri = catalog("RP3");
        let (mut v, mut e, mut f, mut t) = (0, 0, 0, 0);
        assert_eq!(
            tvq_triangulation_counts(tri, &mut v, &mut e, &mut f, &mut t),
            TvqStatus::Ok
        );
        assert_eq!(v as i64 - e as i64 + f as i64 - t as i64, 0);
        let mut h = ptr::null_mut();
        assert_eq!(tvq_triangulation_homology(tri, &mut h), TvqStatus::Ok);
        assert_eq!(take_string(h), "Z/2");

        let mut rep = ptr::null_mut();
        assert_eq!(tvq_compute(tri, 6, TvqEvaluation::Standard, 2, &mut rep), TvqStatus::Ok);
        let mut poly = ptr::null_mut();
        assert_eq!(tvq_report_polynomial(rep, TvqInvariant::Tv1, &mut poly), TvqStatus::Ok);
        assert_eq!(take_string(poly), "2q^3-4q");
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            tvq_report_value(rep, TvqInvariant::Tv1, &mut re, &mut im),
            TvqStatus::Ok
        );
        assert!((re + 3.464).abs() < 5e-4 && im.abs() < 1e-9);
        let (mut a0, mut a1, mut ae) = (0, 0, 0);
        assert_eq!(tvq_report_colorings(rep, &mut a0, &mut a1, &mut ae), TvqStatus::Ok);
        assert_eq!((a0, a1, ae), (11, 8, 11));
        let mut ok = false;
        assert_eq!(tvq_report_checks_pass(rep, &mut ok), TvqStatus::Ok);
        assert!(ok);
        tvq_report_free(rep);

        let mut holds = false;
        assert_eq!(tvq_verify_identities(tri, 5, 2, &mut holds), TvqStatus::Ok);
        assert!(holds);
        tvq_triangulation_free(tri);
    }
}

#[test]
fn mirror_point_flips_the_odd_summand() {
    unsafe {
        let tri = catalog("L(2,1)");
        let (mut s, mut m) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(tvq_compute(tri, 4, TvqEvaluation::Standard, 1, &mut s), TvqStatus::Ok);
        assert_eq!(tvq_compute(tri, 4, TvqEvaluation::Mirror, 1, &mut m), TvqStatus::Ok);
        let value = |rep, which| {
            let (mut re, mut im) = (0.0, 0.0);
            assert_eq!(tvq_report_value(rep, which, &mut re, &mut im), TvqStatus::Ok);
            re
        };
        assert!((value(s, TvqInvariant::Tv1) + value(m, TvqInvariant::Tv1)).abs() < 1e-9);
        assert!((value(s, TvqInvariant::Tv0) - value(m, TvqInvariant::Tv0)).abs() < 1e-9);
        tvq_report_free(s);
        tvq_report_free(m);
        tvq_triangulation_free(tri);
    }
}

#[test]
fn parse_from_text() {
    unsafe {
        let text = cstr(
            "tetrahedra 2\nglue 0 0 1 0123\nglue 0 1 1 0123\nglue 0 2 1 0123\nglue 0 3 1 0123\n\
                         glue 1 0 0 0123\nglue 1 1 0 0123\nglue 1 2 0 0123\nglue 1 3 0 0123\n",
        );
        let mut tri = ptr::null_mut();
        assert_eq!(tvq_triangulation_from_text(text.as_ptr(), &mut tri), TvqStatus::Ok);
        let mut v = 0;
        assert_eq!(
            tvq_triangulation_counts(tri, &mut v, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            TvqStatus::Ok
        );
        assert_eq!(v, 4);
        tvq_triangulation_free(tri);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut tri = ptr::null_mut();
        assert_eq!(
            tvq_triangulation_from_text(cstr("tetrahedra 1\nglue 0 0 0 01x3\n").as_ptr(), &mut tri),
            TvqStatus::ParseError
        );
        assert!(last_error().contains("line 2"));
        assert!(tri.is_null());
        assert_eq!(
            tvq_triangulation_from_text(cstr("tetrahedra 1\n").as_ptr(), &mut tri),
            TvqStatus::InvalidTriangulation
        );
        assert!(last_error().contains("not glued"));
        assert_eq!(
            tvq_triangulation_from_catalog(cstr("L(99,1)").as_ptr(), &mut tri),
            TvqStatus::NotInCatalog
        );
        assert_eq!(
            tvq_triangulation_from_catalog(ptr::null(), &mut tri),
            TvqStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            tvq_triangulation_from_catalog(bad.as_ptr().cast(), &mut tri),
            TvqStatus::InvalidUtf8
        );

        let tri = catalog("S3");
        let mut rep = ptr::null_mut();
        assert_eq!(
            tvq_compute(tri, 2, TvqEvaluation::Standard, 1, &mut rep),
            TvqStatus::InvalidR
        );
        assert_eq!(
            tvq_compute(ptr::null(), 3, TvqEvaluation::Standard, 1, &mut rep),
            TvqStatus::NullPointer
        );
        assert_eq!(
            tvq_compute(tri, 3, TvqEvaluation::Standard, 1, ptr::null_mut()),
            TvqStatus::NullPointer
        );
        assert_eq!(tvq_compute(tri, 3, TvqEvaluation::Standard, 1, &mut rep), TvqStatus::Ok);
        assert!(tvq_last_error_message().is_null());
        tvq_report_free(rep);
        tvq_triangulation_free(tri);

        tvq_triangulation_free(ptr::null_mut());
        tvq_report_free(ptr::null_mut());
        tvq_string_free(ptr::null_mut());
    }
}

#[test]
fn version() {
    let v = unsafe { CStr::from_ptr(tvq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles the C example against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_against_the_header() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/abi-<hash>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libtvq_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let exe = out_dir.join("tvq_smoke");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("examples/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).args(["RP3", "6"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}{}", String::from_utf8_lossy(&out.stderr));
    assert!(text.contains("RP3 H1 = Z/2"), "{text}");
    assert!(text.contains("TV_1 = 2q^3-4q = -3.464"), "{text}");
    assert!(text.contains("TV* = 0.045"), "{text}");
}
