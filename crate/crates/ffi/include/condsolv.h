#ifndef CONDSOLV_H
#define CONDSOLV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_ARGUMENT = 2,
  CS_STATUS_DOMAIN = 3,
  CS_STATUS_NOT_POSITIVE_DEFINITE = 4,
  CS_STATUS_NO_CONVERGENCE = 5,
  CS_STATUS_OUT_OF_RANGE = 6,
  CS_STATUS_BASIS_COLLAPSED = 7,
  // The output buffer is shorter than the data.
  CS_STATUS_BUFFER_TOO_SMALL = 8,
  CS_STATUS_PANIC = 9,
} CsStatus;

// Variational eigenpairs at one `(gamma, a)`.
typedef struct CsSpectrum CsSpectrum;

// Roots of one truncation polynomial.
typedef struct CsTruncation CsTruncation;

typedef struct CsHfReport {
  double a;
  double gamma;
  uintptr_t level;
  double h;
  uintptr_t basis_size;
  double fd_slope;
  double expectation_inv_xi;
  double residual;
  double eigenvector_overlap;
  bool crossing_suspected;
} CsHfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *cs_last_error_message(void);

// `ln Γ(x)` for `x > 0`.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum CsStatus cs_log_gamma(double x, double *out);

// Solves the truncation condition for degree `n`.
//
// # Safety
// `out` must be null or point to writable memory for one pointer.
enum CsStatus cs_truncation_new(uintptr_t n, double gamma, struct CsTruncation **out);

// # Safety
// `h` must be null or a handle from [`cs_truncation_new`] not yet freed.
void cs_truncation_free(struct CsTruncation *h);

// `W = 2n + 2|gamma| + 2`, or NaN for a null handle.
//
// # Safety
// `h` must be null or a live handle.
double cs_truncation_w(const struct CsTruncation *h);

// Number of real roots (`n + 1`), or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
uintptr_t cs_truncation_root_count(const struct CsTruncation *h);

// Copies the ascending roots into `buf`, which must hold at least
// [`cs_truncation_root_count`] values.
//
// # Safety
// `h` must be null or a live handle; `buf` must be null or valid for `len` writes.
enum CsStatus cs_truncation_roots(const struct CsTruncation *h, double *buf, uintptr_t len);

// Rayleigh-Ritz spectrum with `n_basis` functions.
//
// # Safety
// `out` must be null or point to writable memory for one pointer.
enum CsStatus cs_spectrum_new(double gamma, double a, uintptr_t n_basis, struct CsSpectrum **out);

// # Safety
// `h` must be null or a handle from [`cs_spectrum_new`] not yet freed.
void cs_spectrum_free(struct CsSpectrum *h);

// Basis size actually used, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
uintptr_t cs_spectrum_usable_n(const struct CsSpectrum *h);

// Eigenvalue `W_level`.
//
// # Safety
// `h` must be null or a live handle; `out` null or writable.
enum CsStatus cs_spectrum_eigenvalue(const struct CsSpectrum *h, uintptr_t level, double *out);

// `|W^(N) - W^(N-2)|` for `level`; `CS_STATUS_OUT_OF_RANGE` when the smaller
// basis has no such level.
//
// # Safety
// `h` must be null or a live handle; `out` null or writable.
enum CsStatus cs_spectrum_convergence(const struct CsSpectrum *h, uintptr_t level, double *out);

// `<1/xi>` in eigenstate `level`.
//
// # Safety
// `h` must be null or a live handle; `out` null or writable.
enum CsStatus cs_spectrum_expectation_inv_xi(const struct CsSpectrum *h,
                                             uintptr_t level,
                                             double *out);

// Copies the S-normalized coefficients of eigenvector `level` into `buf`,
// which must hold at least [`cs_spectrum_usable_n`] values.
//
// # Safety
// `h` must be null or a live handle; `buf` must be null or valid for `len` writes.
enum CsStatus cs_spectrum_eigenvector(const struct CsSpectrum *h,
                                      uintptr_t level,
                                      double *buf,
                                      uintptr_t len);

// Central-difference `dW/da` against `-<1/xi>`.
//
// # Safety
// `out` must be null or point to a writable [`CsHfReport`].
enum CsStatus cs_hf_check(double gamma,
                          double a,
                          uintptr_t level,
                          uintptr_t n_basis,
                          double h,
                          struct CsHfReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONDSOLV_H */
