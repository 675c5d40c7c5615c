//! Exact truncation solutions and variational spectra for the radial
//! eigenvalue problem
//!
//! ```text
//! -R'' - R'/ξ + γ²/ξ² R - a/ξ R + ξ² R = W R,   0 < ξ < ∞.
//! ```
//!
//! The Frobenius ansatz `R = ξ^|γ| e^{-ξ²/2} Σ c_j ξ^j` leads to a three-term
//! recurrence for `c_j`. Forcing the series to terminate gives polynomial
//! solutions, but only at isolated values of `a`. The Rayleigh-Ritz solver in
//! [`variational`] shows that square-integrable solutions exist for every `a`,
//! and that each terminating solution is just one point on a continuous
//! eigenvalue curve `W_ν(a)`.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose, and the dense
// kernels read more plainly with index loops.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod frobenius;
pub mod models;
pub mod numerics;
pub mod sweep;
pub mod variational;

pub use error::{Error, Result};
pub use frobenius::{ProblemSpec, TruncationSolution};
pub use variational::{BasisSpec, HfReport, SpectrumResult};
