//! Frobenius series solutions and the terminating (polynomial) solutions they
//! admit at special values of `a`.
//!
//! With `R(ξ) = ξ^|γ| e^{-ξ²/2} Σ c_j ξ^j`, the coefficients obey
//!
//! ```text
//! c_{j+2} = [-a c_{j+1} + (2j + 2|γ| + 2 - W) c_j] / [(j + 2)(j + 2|γ| + 2)],
//! c_{-1} = 0, c_0 = 1.
//! ```
//!
//! The series reduces to a degree-`n` polynomial iff `W = 2n + 2|γ| + 2` and
//! `c_{n+1}(a) = 0`; the latter is a polynomial equation of degree `n + 1` in `a`.

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{poly_real_roots, RationalPoly, RootSet, DEFAULT_ROOT_TOL};

/// Number of coefficients past the truncation degree checked for termination.
pub const TERMINATION_WINDOW: usize = 10;

/// The pair `(γ, a)` fixing the radial operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub gamma: f64,
    pub a: f64,
}

impl ProblemSpec {
    pub fn new(gamma: f64, a: f64) -> Result<Self> {
        if !gamma.is_finite() || !a.is_finite() {
            return Err(Error::invalid(format!("gamma = {gamma} and a = {a} must be finite")));
        }
        Ok(Self { gamma, a })
    }

    /// Only `|γ|` enters the operator.
    pub fn abs_gamma(&self) -> f64 {
        self.gamma.abs()
    }
}

/// Series coefficients `c_0..=c_jmax` for one `(γ, a, W)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesState {
    pub gamma: f64,
    pub a: f64,
    pub w: f64,
    pub coefficients: Vec<f64>,
}

impl SeriesState {
    /// `P(ξ) = Σ c_j ξ^j`.
    pub fn polynomial_value(&self, xi: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * xi + c)
    }
}

/// Runs the three-term recurrence up to `c_jmax`.
pub fn recurrence_coeffs(spec: &ProblemSpec, w: f64, jmax: usize) -> SeriesState {
    let g = spec.abs_gamma();
    let a = spec.a;
    let mut c = Vec::with_capacity(jmax + 1);
    c.push(1.0);
    for k in 1..=jmax {
        // k = j + 2
        let prev = c[k - 1];
        let prev2 = if k >= 2 { c[k - 2] } else { 0.0 };
        let kf = k as f64;
        let denom = kf * (kf + 2.0 * g);
        c.push((-a * prev + (2.0 * kf - 2.0 + 2.0 * g - w) * prev2) / denom);
    }
    SeriesState {
        gamma: spec.gamma,
        a,
        w,
        coefficients: c,
    }
}

/// `W_{n,γ} = 2n + 2|γ| + 2`.
pub fn truncation_eigenvalue(n: usize, gamma: f64) -> f64 {
    2.0 * n as f64 + 2.0 * gamma.abs() + 2.0
}

/// `c_{n+1}` as an exact polynomial in `a` for a rational `|γ|`.
///
/// With `W = 2n + 2|γ| + 2` the recurrence becomes
/// `c_k = [-a c_{k-1} + 2(k - n - 2) c_{k-2}] / [k (k + 2|γ|)]`.
pub fn truncation_polynomial_exact(n: usize, abs_gamma: &BigRational) -> Result<RationalPoly> {
    if abs_gamma < &BigRational::zero() {
        return Err(Error::invalid("|gamma| must be nonnegative"));
    }
    let minus_a = RationalPoly::new(vec![BigRational::zero(), -BigRational::one()]);
    let two_g = abs_gamma * BigRational::from_integer(BigInt::from(2));
    let mut prev2 = RationalPoly::zero();
    let mut prev = RationalPoly::one();
    for k in 1..=(n + 1) {
        let kq = BigRational::from_integer(BigInt::from(k));
        let weight = BigRational::from_integer(BigInt::from(2 * (k as i64 - n as i64 - 2)));
        let denom = &kq * (&kq + &two_g);
        let next = minus_a
            .mul(&prev)
            .add(&prev2.scale(&weight))
            .scale(&denom.recip());
        prev2 = prev;
        prev = next;
    }
    Ok(prev)
}

/// `c_{n+1}(a)` for a floating-point `γ`. Every finite `f64` is a dyadic
/// rational, so the polynomial is built exactly from the value as given.
pub fn truncation_polynomial(n: usize, gamma: f64) -> Result<RationalPoly> {
    let g = BigRational::from_float(gamma.abs())
        .ok_or_else(|| Error::invalid(format!("gamma = {gamma} must be finite")))?;
    truncation_polynomial_exact(n, &g)
}

/// A terminating solution family: one eigenvalue `W_{n,γ}` shared by the
/// `n + 1` roots `a^{(1)} < … < a^{(n+1)}` of `c_{n+1}(a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSolution {
    pub n: usize,
    pub gamma: f64,
    pub w: f64,
    #[serde(serialize_with = "serialize_poly")]
    pub poly: RationalPoly,
    pub roots: RootSet,
    /// `max_{n<j≤n+10} |c_j| / max_{j≤n} |c_j|` for each root, from the
    /// floating-point recurrence.
    pub termination_residuals: Vec<f64>,
}

fn serialize_poly<S: serde::Serializer>(p: &RationalPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

impl TruncationSolution {
    /// Series coefficients at the `k`-th root (1-based, ascending).
    pub fn series_at_root(&self, k: usize) -> Option<SeriesState> {
        let a = *self.roots.roots.get(k.checked_sub(1)?)?;
        let spec = ProblemSpec { gamma: self.gamma, a };
        Some(recurrence_coeffs(&spec, self.w, self.n + TERMINATION_WINDOW))
    }
}

/// Relative size of the coefficients past degree `n`.
pub fn termination_residual(series: &SeriesState, n: usize) -> f64 {
    let c = &series.coefficients;
    let head = c[..=n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = c[n + 1..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    tail / head
}

pub fn truncation_spectrum(n: usize, gamma: f64) -> Result<TruncationSolution> {
    let poly = truncation_polynomial(n, gamma)?;
    let roots = poly_real_roots(&poly, DEFAULT_ROOT_TOL)?;
    let w = truncation_eigenvalue(n, gamma);
    let mut sol = TruncationSolution {
        n,
        gamma,
        w,
        poly,
        roots,
        termination_residuals: Vec::new(),
    };
    sol.termination_residuals = (1..=sol.roots.len())
        .map(|k| termination_residual(&sol.series_at_root(k).expect("root index in range"), n))
        .collect();
    Ok(sol)
}

/// `R(ξ) = ξ^|γ| e^{-ξ²/2} Σ_{j≤jmax} c_j ξ^j`, summed in log-magnitude form so
/// that large `ξ` does not overflow the partial sums.
pub fn evaluate_radial(spec: &ProblemSpec, w: f64, jmax: usize, xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::invalid(format!("xi = {xi} must be positive")));
    }
    let series = recurrence_coeffs(spec, w, jmax);
    let ln_xi = xi.ln();
    let terms: Vec<(f64, f64)> = series
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| (c.signum(), c.abs().ln() + j as f64 * ln_xi))
        .collect();
    let Some(peak) = terms.iter().map(|t| t.1).reduce(f64::max) else {
        return Ok(0.0);
    };
    let sum: f64 = terms.iter().map(|(s, l)| s * (l - peak).exp()).sum();
    if sum == 0.0 {
        return Ok(0.0);
    }
    let log_mag = peak + sum.abs().ln() + spec.abs_gamma() * ln_xi - 0.5 * xi * xi;
    Ok(sum.signum() * log_mag.exp())
}
