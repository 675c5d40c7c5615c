//! C ABI for the truncation and variational solvers.
//!
//! Every fallible call returns a [`CsStatus`]; on failure the message is
//! available from [`cs_last_error_message`] on the same thread. Results live
//! behind opaque handles that the caller releases with the matching `_free`.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use condsolv::frobenius::{truncation_spectrum, ProblemSpec, TruncationSolution};
use condsolv::numerics::log_gamma;
use condsolv::variational::{expectation_inv_xi, hellmann_feynman_check, spectrum, SpectrumResult};
use condsolv::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NotPositiveDefinite = 4,
    NoConvergence = 5,
    OutOfRange = 6,
    BasisCollapsed = 7,
    /// The output buffer is shorter than the data.
    BufferTooSmall = 8,
    Panic = 9,
}

/// Roots of one truncation polynomial.
pub struct CsTruncation {
    inner: TruncationSolution,
}

/// Variational eigenpairs at one `(gamma, a)`.
pub struct CsSpectrum {
    inner: SpectrumResult,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CsHfReport {
    pub a: f64,
    pub gamma: f64,
    pub level: usize,
    pub h: f64,
    pub basis_size: usize,
    pub fd_slope: f64,
    pub expectation_inv_xi: f64,
    pub residual: f64,
    pub eigenvector_overlap: f64,
    pub crossing_suspected: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CsStatus {
    match err {
        Error::Domain(_) => CsStatus::Domain,
        Error::NotPositiveDefinite { .. } => CsStatus::NotPositiveDefinite,
        Error::NoConvergence { .. } => CsStatus::NoConvergence,
        Error::LevelOutOfRange { .. } => CsStatus::OutOfRange,
        Error::BasisCollapsed { .. } => CsStatus::BasisCollapsed,
        Error::DimensionMismatch(..) | Error::ZeroPolynomial | Error::InvalidArgument(_) => CsStatus::InvalidArgument,
    }
}

fn fail(status: CsStatus, msg: &str) -> CsStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (CsStatus, String)>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CsStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, &msg),
        Err(_) => fail(CsStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> (CsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (CsStatus, String) {
    (CsStatus::NullPointer, format!("{name} is null"))
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), (CsStatus, String)> {
    if buf.is_null() {
        return Err(null_err("buf"));
    }
    if len < src.len() {
        return Err((
            CsStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `ln Γ(x)` for `x > 0`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cs_log_gamma(x: f64, out: *mut f64) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = log_gamma(x).map_err(lib_err)?;
        Ok(())
    })
}

/// Solves the truncation condition for degree `n`.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_truncation_new(n: usize, gamma: f64, out: *mut *mut CsTruncation) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = ptr::null_mut();
        let inner = truncation_spectrum(n, gamma).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CsTruncation { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`cs_truncation_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_truncation_free(h: *mut CsTruncation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `W = 2n + 2|gamma| + 2`, or NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_truncation_w(h: *const CsTruncation) -> f64 {
    h.as_ref().map_or(f64::NAN, |t| t.inner.w)
}

/// Number of real roots (`n + 1`), or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_truncation_root_count(h: *const CsTruncation) -> usize {
    h.as_ref().map_or(0, |t| t.inner.roots.len())
}

/// Copies the ascending roots into `buf`, which must hold at least
/// [`cs_truncation_root_count`] values.
///
/// # Safety
/// `h` must be null or a live handle; `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cs_truncation_roots(h: *const CsTruncation, buf: *mut f64, len: usize) -> CsStatus {
    guard(|| {
        let t = h.as_ref().ok_or_else(|| null_err("handle"))?;
        copy_out(&t.inner.roots.roots, buf, len)
    })
}

/// Rayleigh-Ritz spectrum with `n_basis` functions.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_new(gamma: f64, a: f64, n_basis: usize, out: *mut *mut CsSpectrum) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = ptr::null_mut();
        let spec = ProblemSpec::new(gamma, a).map_err(lib_err)?;
        let inner = spectrum(&spec, n_basis).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CsSpectrum { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`cs_spectrum_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_free(h: *mut CsSpectrum) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Basis size actually used, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_usable_n(h: *const CsSpectrum) -> usize {
    h.as_ref().map_or(0, |s| s.inner.usable_n)
}

unsafe fn level_value(
    h: *const CsSpectrum,
    level: usize,
    out: *mut f64,
    get: impl FnOnce(&SpectrumResult) -> Result<f64, (CsStatus, String)>,
) -> CsStatus {
    guard(|| {
        let s = h.as_ref().ok_or_else(|| null_err("handle"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        if level >= s.inner.usable_n {
            return Err(lib_err(Error::LevelOutOfRange {
                level,
                usable: s.inner.usable_n,
            }));
        }
        *out = get(&s.inner)?;
        Ok(())
    })
}

/// Eigenvalue `W_level`.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_eigenvalue(h: *const CsSpectrum, level: usize, out: *mut f64) -> CsStatus {
    level_value(h, level, out, |s| Ok(s.eigenvalues[level]))
}

/// `|W^(N) - W^(N-2)|` for `level`; `CS_STATUS_OUT_OF_RANGE` when the smaller
/// basis has no such level.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_convergence(h: *const CsSpectrum, level: usize, out: *mut f64) -> CsStatus {
    level_value(h, level, out, |s| {
        s.convergence_estimate[level].ok_or_else(|| {
            (
                CsStatus::OutOfRange,
                format!("no convergence estimate for level {level}"),
            )
        })
    })
}

/// `<1/xi>` in eigenstate `level`.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_expectation_inv_xi(h: *const CsSpectrum, level: usize, out: *mut f64) -> CsStatus {
    level_value(h, level, out, |s| expectation_inv_xi(s, level).map_err(lib_err))
}

/// Copies the S-normalized coefficients of eigenvector `level` into `buf`,
/// which must hold at least [`cs_spectrum_usable_n`] values.
///
/// # Safety
/// `h` must be null or a live handle; `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cs_spectrum_eigenvector(h: *const CsSpectrum, level: usize, buf: *mut f64, len: usize) -> CsStatus {
    guard(|| {
        let s = h.as_ref().ok_or_else(|| null_err("handle"))?;
        let v = s.inner.eigenvectors.get(level).ok_or_else(|| {
            lib_err(Error::LevelOutOfRange {
                level,
                usable: s.inner.usable_n,
            })
        })?;
        copy_out(v, buf, len)
    })
}

/// Central-difference `dW/da` against `-<1/xi>`.
///
/// # Safety
/// `out` must be null or point to a writable [`CsHfReport`].
#[no_mangle]
pub unsafe extern "C" fn cs_hf_check(
    gamma: f64,
    a: f64,
    level: usize,
    n_basis: usize,
    h: f64,
    out: *mut CsHfReport,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let spec = ProblemSpec::new(gamma, a).map_err(lib_err)?;
        let r = hellmann_feynman_check(&spec, level, n_basis, h).map_err(lib_err)?;
        *out = CsHfReport {
            a: r.a,
            gamma: r.gamma,
            level: r.level,
            h: r.h,
            basis_size: r.basis_size,
            fd_slope: r.fd_slope,
            expectation_inv_xi: r.expectation_inv_xi,
            residual: r.residual,
            eigenvector_overlap: r.eigenvector_overlap,
            crossing_suspected: r.crossing_suspected,
        };
        Ok(())
    })
}
