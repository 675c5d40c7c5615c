use std::ffi::CStr;
use std::ptr;

use condsolv_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cs_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn truncation_roots_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(cs_truncation_new(1, 0.0, &mut h), CsStatus::Ok);
        assert!(!h.is_null());
        assert_eq!(cs_truncation_w(h), 4.0);
        assert_eq!(cs_truncation_root_count(h), 2);
        let mut buf = [0.0; 2];
        assert_eq!(cs_truncation_roots(h, buf.as_mut_ptr(), buf.len()), CsStatus::Ok);
        assert!((buf[0] + 2f64.sqrt()).abs() < 1e-13);
        assert!((buf[1] - 2f64.sqrt()).abs() < 1e-13);
        assert_eq!(last_error(), "");
        cs_truncation_free(h);
    }
}

#[test]
fn short_buffer_is_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(cs_truncation_new(3, 0.5, &mut h), CsStatus::Ok);
        let mut buf = [0.0; 2];
        assert_eq!(cs_truncation_roots(h, buf.as_mut_ptr(), buf.len()), CsStatus::BufferTooSmall);
        assert!(last_error().contains("4 needed"));
        assert_eq!(cs_truncation_roots(h, ptr::null_mut(), 4), CsStatus::NullPointer);
        cs_truncation_free(h);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert!(cs_truncation_w(ptr::null()).is_nan());
        assert_eq!(cs_truncation_root_count(ptr::null()), 0);
        assert_eq!(cs_spectrum_usable_n(ptr::null()), 0);
        cs_truncation_free(ptr::null_mut());
        cs_spectrum_free(ptr::null_mut());
        let mut x = 0.0;
        assert_eq!(cs_spectrum_eigenvalue(ptr::null(), 0, &mut x), CsStatus::NullPointer);
        assert_eq!(cs_truncation_new(1, 0.0, ptr::null_mut()), CsStatus::NullPointer);
        assert!(last_error().contains("null"));
    }
}

#[test]
fn spectrum_identity() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(cs_spectrum_new(0.0, -(2f64.sqrt()), 25, &mut h), CsStatus::Ok);
        let n = cs_spectrum_usable_n(h);
        assert!((20..=25).contains(&n));

        let mut w = 0.0;
        assert_eq!(cs_spectrum_eigenvalue(h, 0, &mut w), CsStatus::Ok);
        assert!((w - 4.0).abs() < 1e-8);

        let mut conv = 1.0;
        assert_eq!(cs_spectrum_convergence(h, 0, &mut conv), CsStatus::Ok);
        assert!(conv < 1e-6);

        let mut inv = 0.0;
        assert_eq!(cs_spectrum_expectation_inv_xi(h, 0, &mut inv), CsStatus::Ok);
        assert!(inv > 0.0);

        let mut vec = vec![0.0; n];
        assert_eq!(cs_spectrum_eigenvector(h, 0, vec.as_mut_ptr(), n), CsStatus::Ok);
        assert!(vec.iter().any(|&c| c != 0.0));

        assert_eq!(cs_spectrum_eigenvalue(h, n, &mut w), CsStatus::OutOfRange);
        assert!(!last_error().is_empty());
        assert_eq!(cs_spectrum_eigenvector(h, n, vec.as_mut_ptr(), n), CsStatus::OutOfRange);
        cs_spectrum_free(h);
    }
}

#[test]
fn invalid_inputs_map_to_statuses() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(cs_spectrum_new(f64::NAN, 0.0, 10, &mut h), CsStatus::InvalidArgument);
        assert!(h.is_null());
        let mut x = 0.0;
        assert_eq!(cs_log_gamma(-1.0, &mut x), CsStatus::Domain);
        assert_eq!(cs_log_gamma(5.0, &mut x), CsStatus::Ok);
        assert!((x - 24f64.ln()).abs() < 1e-13);
    }
}

#[test]
fn hf_report() {
    let mut r = CsHfReport::default();
    let status = unsafe { cs_hf_check(1.0, 0.5, 0, 30, 1e-4, &mut r) };
    assert_eq!(status, CsStatus::Ok);
    assert_eq!(r.level, 0);
    assert!(r.fd_slope < 0.0);
    assert!(r.residual < 1e-5);
    assert!(!r.crossing_suspected);
    assert_eq!(unsafe { cs_hf_check(1.0, 0.5, 0, 30, 1e-4, ptr::null_mut()) }, CsStatus::NullPointer);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/condsolv.h")).unwrap();
    for name in [
        "cs_last_error_message",
        "cs_log_gamma",
        "cs_truncation_new",
        "cs_truncation_free",
        "cs_truncation_w",
        "cs_truncation_root_count",
        "cs_truncation_roots",
        "cs_spectrum_new",
        "cs_spectrum_free",
        "cs_spectrum_usable_n",
        "cs_spectrum_eigenvalue",
        "cs_spectrum_convergence",
        "cs_spectrum_expectation_inv_xi",
        "cs_spectrum_eigenvector",
        "cs_hf_check",
        "CS_STATUS_BUFFER_TOO_SMALL",
        "typedef struct CsSpectrum CsSpectrum;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
