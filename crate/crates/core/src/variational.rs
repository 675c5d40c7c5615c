//! Rayleigh-Ritz solution of the radial equation in the non-orthogonal basis
//! `u_j(ξ) = ξ^{|γ|+j} e^{-ξ²/2}`, `j = 0..N-1`, with measure `ξ dξ`.
//!
//! Every matrix element reduces to the Gaussian moment
//! `I(p) = ∫₀^∞ ξ^p e^{-ξ²} dξ = ½ Γ((p + 1)/2)`:
//!
//! ```text
//! S_ij   = I(2g + i + j + 1)
//! H_ij   = -j(2g + j) I(2g + i + j - 1) - a I(2g + i + j) + 2(g + j + 1) I(2g + i + j + 1)
//! (1/ξ)_ij = I(2g + i + j)
//! ```
//!
//! with `g = |γ|`. The overlap of this basis is a Hankel matrix of moments and
//! is severely ill conditioned, so the solver assembles and factors it in
//! double-double arithmetic, pre-scaled by `diag(S)^{-1/2}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{truncation_eigenvalue, truncation_spectrum, ProblemSpec};
use crate::numerics::{
    cholesky, gamma_half_ratio, log_gamma, reduce_pencil, sym_eigen, DoubleDouble, ReducedPencil, SymMatrix,
};

/// Default number of basis functions.
pub const DEFAULT_BASIS_SIZE: usize = 30;
/// Default central-difference step for the Hellmann-Feynman check.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Eigenvector overlap below which a level is considered to have crossed.
pub const CROSSING_OVERLAP: f64 = 0.9;
/// Relative asymmetry tolerated in the raw Hamiltonian before symmetrization.
pub const HAMILTONIAN_SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisSpec {
    pub gamma: f64,
    pub size: usize,
}

impl BasisSpec {
    pub fn new(gamma: f64, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("basis size must be at least 1"));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma = {gamma} must be finite")));
        }
        Ok(Self { gamma, size })
    }

    fn g(&self) -> f64 {
        self.gamma.abs()
    }

    /// `ln I(2g + m)`, the log of the moment with power `2g + m`.
    fn ln_moment(&self, m: i64) -> f64 {
        let p = 2.0 * self.g() + m as f64;
        (0.5f64).ln() + log_gamma(0.5 * (p + 1.0)).expect("moment argument is positive")
    }

    /// `ln S_ii`.
    fn ln_norm(&self, i: usize) -> f64 {
        self.ln_moment(2 * i as i64 + 1)
    }
}

/// Raw and scaled matrix elements share this assembly; `shift` is subtracted
/// from every log-moment (zero for the raw matrices).
fn hamiltonian_entry(basis: &BasisSpec, a: f64, i: usize, j: usize, shift: f64) -> f64 {
    let g = basis.g();
    let m = (i + j) as i64;
    let jf = j as f64;
    let kinetic = jf * (2.0 * g + jf);
    let mut v = -a * (basis.ln_moment(m) - shift).exp()
        + 2.0 * (g + jf + 1.0) * (basis.ln_moment(m + 1) - shift).exp();
    if kinetic != 0.0 {
        v -= kinetic * (basis.ln_moment(m - 1) - shift).exp();
    }
    v
}

fn checked_symmetrize(n: usize, raw: Vec<f64>) -> SymMatrix {
    let max = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((raw[i * n + j] - raw[j * n + i]).abs());
        }
    }
    assert!(
        asym <= HAMILTONIAN_SYMMETRY_TOL * max,
        "Hamiltonian asymmetry {asym:e} exceeds tolerance (max entry {max:e})"
    );
    SymMatrix::symmetrized(n, raw).expect("dimension is positive")
}

/// Overlap matrix `S_ij = ½ Γ(|γ| + (i + j)/2 + 1)`.
pub fn overlap_matrix(basis: &BasisSpec) -> SymMatrix {
    SymMatrix::from_upper(basis.size, |i, j| basis.ln_moment((i + j) as i64 + 1).exp())
        .expect("basis size is positive")
}

/// Matrix of `1/ξ`, `M_ij = ½ Γ(|γ| + (i + j + 1)/2)`.
pub fn inverse_xi_matrix(basis: &BasisSpec) -> SymMatrix {
    SymMatrix::from_upper(basis.size, |i, j| basis.ln_moment((i + j) as i64).exp())
        .expect("basis size is positive")
}

/// Unsymmetrized `H_ij = ⟨u_i | L u_j⟩`, row-major.
pub fn hamiltonian_raw(basis: &BasisSpec, a: f64) -> Vec<f64> {
    let n = basis.size;
    let mut raw = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            raw[i * n + j] = hamiltonian_entry(basis, a, i, j, 0.0);
        }
    }
    raw
}

/// Hamiltonian matrix, checked for analytic symmetry and then symmetrized.
pub fn hamiltonian_matrix(basis: &BasisSpec, a: f64) -> SymMatrix {
    checked_symmetrize(basis.size, hamiltonian_raw(basis, a))
}

/// Unit roundoff of double-double arithmetic.
const DD_EPSILON: f64 = 4.93e-32;

/// Largest tolerated `ε_dd ‖Ŝ⁻¹‖` for the scaled overlap `Ŝ`. Trailing basis
/// functions are dropped until the rounding error of the assembled overlap is
/// this small relative to its smallest eigenvalue.
pub const OVERLAP_TOLERANCE: f64 = 1e-2;

/// `D S D`, `D H D` and `D M D` for `D = diag(S)^{-1/2}`, in double-double.
///
/// With `s = g + 1`, every moment is `½ Γ(s) s^{h/2} v(h)` where `h` is its
/// power minus `2g + 1` and `v` is a product of ratios of order one:
/// `v(2k) = ∏_{t<k} (s + t)/s` and
/// `v(2k-1) = Γ(g + ½)/Γ(g + 1) · √s · ∏_{t<k} (g + ½ + t)/s`.
/// The common factor `½ Γ(s)` cancels under the scaling, so no gamma function
/// of large argument is ever formed.
struct ScaledSystem {
    s: SymMatrix<DoubleDouble>,
    kinetic: SymMatrix<DoubleDouble>,
    inv_xi: SymMatrix<DoubleDouble>,
}

impl ScaledSystem {
    fn new(basis: &BasisSpec) -> Self {
        let n = basis.size;
        let dd = DoubleDouble::from_f64;
        let g = dd(basis.g());
        let s = g + DoubleDouble::ONE;
        let half = dd(0.5);
        let q = gamma_half_ratio(g + half).expect("g + 1/2 is positive");
        let root_s = s.sqrt();
        let inv_root_s = root_s.recip();
        let inv_s = s.recip();

        // v(h) for h = -1..=2n-2, stored at index h + 1.
        let mut even = DoubleDouble::ONE;
        let mut odd = q * root_s;
        let mut v = Vec::with_capacity(2 * n);
        for k in 0..n {
            v.push(odd);
            v.push(even);
            odd = odd * (g + half + dd(k as f64)) * inv_s;
            even = even * (s + dd(k as f64)) * inv_s;
        }
        let root_norm: Vec<DoubleDouble> = (0..n).map(|i| v[2 * i + 1].sqrt()).collect();
        let power = [inv_s, inv_root_s, DoubleDouble::ONE];
        // Scaled moment of power 2g + i + j + 1 + shift, shift ∈ {-2, -1, 0}.
        let moment = |i: usize, j: usize, shift: i64| {
            let h = (i + j) as i64 + shift;
            v[(h + 1) as usize] * power[(shift + 2) as usize] / (root_norm[i] * root_norm[j])
        };

        let s_hat = SymMatrix::from_upper(n, |i, j| if i == j { DoubleDouble::ONE } else { moment(i, j, 0) })
            .expect("basis size is positive");
        let inv_xi = SymMatrix::from_upper(n, |i, j| moment(i, j, -1)).expect("basis size is positive");
        let two = dd(2.0);
        // The kinetic part `-j(2g + j) I(.. - 1) + 2(g + j + 1) I(.. + 1)` is
        // symmetric analytically; average the two orderings.
        let half_kinetic = |i: usize, j: usize| {
            let jf = dd(j as f64);
            let mut k = two * (g + jf + DoubleDouble::ONE) * moment(i, j, 0);
            if j > 0 {
                k -= jf * (two * g + jf) * moment(i, j, -2);
            }
            k
        };
        let kinetic = SymMatrix::from_upper(n, |i, j| half * (half_kinetic(i, j) + half_kinetic(j, i)))
            .expect("basis size is positive");
        Self {
            s: s_hat,
            kinetic,
            inv_xi,
        }
    }

    fn hamiltonian(&self, a: f64) -> SymMatrix<DoubleDouble> {
        let a = DoubleDouble::from_f64(a);
        SymMatrix::from_upper(self.s.dim(), |i, j| self.kinetic.get(i, j) - a * self.inv_xi.get(i, j))
            .expect("basis size is positive")
    }
}

/// Variational eigenpairs for one `(γ, a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub spec: ProblemSpec,
    /// The requested basis.
    pub basis: BasisSpec,
    /// Basis size actually used after dropping nearly dependent functions.
    pub usable_n: usize,
    /// Ascending `W_0 ≤ W_1 ≤ …`.
    pub eigenvalues: Vec<f64>,
    /// Coefficients on `u_j`, normalized to `cᵀ S c = 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `|W_ν^{(N)} - W_ν^{(N-2)}|` at `N = usable_n`; `None` where the smaller
    /// basis has no level `ν`.
    pub convergence_estimate: Vec<Option<f64>>,
    /// Eigenvectors of the reduced standard problem.
    #[serde(skip)]
    reduced_vectors: Vec<Vec<f64>>,
    /// `1/ξ` in the orthonormalized basis.
    #[serde(skip)]
    reduced_inv_xi: SymMatrix,
}

impl SpectrumResult {
    pub fn shrunk(&self) -> bool {
        self.usable_n < self.basis.size
    }
}

struct Solved {
    values: Vec<f64>,
    reduced_vectors: Vec<Vec<f64>>,
    pencil: ReducedPencil<DoubleDouble>,
    system: ScaledSystem,
}

fn solve_exact(spec: &ProblemSpec, size: usize) -> Result<Solved> {
    let basis = BasisSpec::new(spec.gamma, size)?;
    let system = ScaledSystem::new(&basis);
    let pencil = reduce_pencil(&system.hamiltonian(spec.a), &system.s, 0.0)?;
    let eig = sym_eigen(&pencil.reduced)?;
    Ok(Solved {
        values: eig.values,
        reduced_vectors: eig.vectors,
        pencil,
        system,
    })
}

/// Largest basis size not above `size` whose scaled overlap is resolved to
/// `tolerance` in double-double.
fn usable_size(gamma: f64, size: usize, tolerance: f64) -> Result<usize> {
    let system = ScaledSystem::new(&BasisSpec::new(gamma, size)?);
    let factor = match cholesky(&system.s) {
        Ok(f) => f,
        // Leading blocks of a positive definite matrix stay positive definite.
        Err(Error::NotPositiveDefinite { index, .. }) if index >= 1 => {
            return usable_size(gamma, index, tolerance);
        }
        Err(Error::NotPositiveDefinite { .. }) => {
            return Err(Error::BasisCollapsed {
                usable: 0,
                required: 1,
            })
        }
        Err(e) => return Err(e),
    };
    let norms = factor.inverse_norms_sq();
    let usable = norms.iter().take_while(|&&v| v * DD_EPSILON <= tolerance).count();
    if usable == 0 {
        return Err(Error::BasisCollapsed {
            usable: 0,
            required: 1,
        });
    }
    Ok(usable)
}

/// Rayleigh-Ritz spectrum with `size` basis functions.
///
/// The overlap is assembled and factored in double-double. Trailing functions
/// are dropped while `ε_dd ‖Ŝ⁻¹‖` exceeds [`OVERLAP_TOLERANCE`], so `usable_n`
/// can be smaller than `size`.
pub fn spectrum(spec: &ProblemSpec, size: usize) -> Result<SpectrumResult> {
    spectrum_with_tolerance(spec, size, OVERLAP_TOLERANCE)
}

/// [`spectrum`] with an explicit overlap tolerance.
pub fn spectrum_with_tolerance(spec: &ProblemSpec, size: usize, tolerance: f64) -> Result<SpectrumResult> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid(format!("overlap tolerance {tolerance} must be positive")));
    }
    let basis = BasisSpec::new(spec.gamma, size)?;
    let usable_n = usable_size(spec.gamma, size, tolerance)?;
    let solved = solve_exact(spec, usable_n)?;
    let convergence_estimate = if usable_n >= 3 {
        let coarse = solve_exact(spec, usable_n - 2)?;
        (0..usable_n)
            .map(|k| coarse.values.get(k).map(|w| (solved.values[k] - w).abs()))
            .collect()
    } else {
        vec![None; usable_n]
    };
    let usable = BasisSpec::new(spec.gamma, usable_n)?;
    let raw_scale: Vec<f64> = (0..usable_n).map(|i| (-0.5 * usable.ln_norm(i)).exp()).collect();
    let eigenvectors = solved
        .reduced_vectors
        .iter()
        .map(|y| {
            solved
                .pencil
                .back_transform(y)
                .iter()
                .zip(&raw_scale)
                .map(|(c, d)| c.to_f64() * d)
                .collect()
        })
        .collect();
    let reduced_inv_xi = solved.pencil.transform(&solved.system.inv_xi)?;
    Ok(SpectrumResult {
        spec: *spec,
        basis,
        usable_n,
        eigenvalues: solved.values,
        eigenvectors,
        convergence_estimate,
        reduced_vectors: solved.reduced_vectors,
        reduced_inv_xi,
    })
}

/// `⟨1/ξ⟩` in the variational eigenstate `level`.
pub fn expectation_inv_xi(result: &SpectrumResult, level: usize) -> Result<f64> {
    let y = result.reduced_vectors.get(level).ok_or(Error::LevelOutOfRange {
        level,
        usable: result.usable_n,
    })?;
    Ok(result.reduced_inv_xi.bilinear(y, y))
}

/// Central-difference slope `∂W/∂a` against `-⟨1/ξ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HfReport {
    pub a: f64,
    pub gamma: f64,
    pub level: usize,
    pub h: f64,
    pub basis_size: usize,
    pub fd_slope: f64,
    pub expectation_inv_xi: f64,
    pub residual: f64,
    /// `|c(a-h)ᵀ S c(a+h)|` for the tracked level.
    pub eigenvector_overlap: f64,
    /// Set when the overlap falls below [`CROSSING_OVERLAP`].
    pub crossing_suspected: bool,
}

pub fn hellmann_feynman_check(spec: &ProblemSpec, level: usize, size: usize, h: f64) -> Result<HfReport> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("finite-difference step h = {h} must be positive")));
    }
    let center = spectrum(spec, size)?;
    if level >= center.usable_n {
        return Err(Error::LevelOutOfRange {
            level,
            usable: center.usable_n,
        });
    }
    // S does not depend on a, so both sides shrink to the same basis and share
    // the orthonormalization of the center.
    let n = center.usable_n;
    let lo = spectrum(&ProblemSpec::new(spec.gamma, spec.a - h)?, n)?;
    let hi = spectrum(&ProblemSpec::new(spec.gamma, spec.a + h)?, n)?;
    debug_assert_eq!((lo.usable_n, hi.usable_n), (n, n));
    let fd_slope = (hi.eigenvalues[level] - lo.eigenvalues[level]) / (2.0 * h);
    let expectation = expectation_inv_xi(&center, level)?;
    let overlap = lo.reduced_vectors[level]
        .iter()
        .zip(&hi.reduced_vectors[level])
        .map(|(x, y)| x * y)
        .sum::<f64>()
        .abs();
    Ok(HfReport {
        a: spec.a,
        gamma: spec.gamma,
        level,
        h,
        basis_size: n,
        fd_slope,
        expectation_inv_xi: expectation,
        residual: (fd_slope + expectation).abs(),
        eigenvector_overlap: overlap,
        crossing_suspected: overlap < CROSSING_OVERLAP,
    })
}

/// A truncation root compared with the variational level it should lie on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationMatch {
    pub n: usize,
    /// 1-based root index.
    pub k: usize,
    pub a_root: f64,
    /// `ν = k - 1`.
    pub level: usize,
    pub w_truncation: f64,
    /// `None` when the usable basis has no level `ν`.
    pub w_variational: Option<f64>,
    pub mismatch: Option<f64>,
    pub usable_n: usize,
}

/// Compares every root `a^{(k)}` of `c_{n+1}` with the `(k-1)`-th variational
/// level at that `a`.
pub fn truncation_point_locator(n: usize, gamma: f64, size: usize) -> Result<Vec<TruncationMatch>> {
    if size < n + 3 {
        return Err(Error::invalid(format!(
            "basis size {size} must be at least n + 3 = {}",
            n + 3
        )));
    }
    let sol = truncation_spectrum(n, gamma)?;
    let w = truncation_eigenvalue(n, gamma);
    sol.roots
        .roots
        .par_iter()
        .enumerate()
        .map(|(idx, &a_root)| {
            let res = spectrum(&ProblemSpec::new(gamma, a_root)?, size)?;
            let w_variational = res.eigenvalues.get(idx).copied();
            Ok(TruncationMatch {
                n,
                k: idx + 1,
                a_root,
                level: idx,
                w_truncation: w,
                w_variational,
                mismatch: w_variational.map(|v| (v - w).abs()),
                usable_n: res.usable_n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    fn spec(gamma: f64, a: f64) -> ProblemSpec {
        ProblemSpec::new(gamma, a).unwrap()
    }

    /// Composite Simpson on [0, 12] for moments of `e^{-ξ²}`.
    fn quad(f: impl Fn(f64) -> f64) -> f64 {
        let n = 24000;
        let h = 12.0 / n as f64;
        let mut s = f(0.0) + f(12.0);
        for k in 1..n {
            let x = k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn overlap_entries_against_quadrature() {
        let s = overlap_matrix(&BasisSpec::new(0.0, 3).unwrap());
        let s00 = quad(|x| x * (-x * x).exp());
        let s01 = quad(|x| x * x * (-x * x).exp());
        assert!((s.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((s.get(0, 0) - s00).abs() < 1e-12);
        assert!((s.get(0, 1) - SQRT_PI / 4.0).abs() < 1e-15);
        assert!((s.get(0, 1) - s01).abs() < 1e-12);
    }

    #[test]
    fn overlap_is_hankel() {
        for g in [0.0, 0.5, 1.3] {
            let s = overlap_matrix(&BasisSpec::new(g, 8).unwrap());
            for i in 0..8 {
                for j in 0..8 {
                    if i + 1 < 8 && j > 0 {
                        assert_eq!(s.get(i, j), s.get(i + 1, j - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn single_function_hamiltonian() {
        let b = BasisSpec::new(0.0, 1).unwrap();
        let h = hamiltonian_matrix(&b, 0.0);
        assert!((h.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((h.get(0, 0) / overlap_matrix(&b).get(0, 0) - 2.0).abs() < 1e-15);
        for a in [-2.0, 0.7, 3.0] {
            let h = hamiltonian_matrix(&b, a);
            // ∫ (-a/ξ + 2) ξ e^{-ξ²} dξ by quadrature
            let q = quad(|x| (-a + 2.0 * x) * (-x * x).exp());
            assert!((h.get(0, 0) - (1.0 - a * SQRT_PI / 2.0)).abs() < 1e-14);
            assert!((h.get(0, 0) - q).abs() < 1e-11);
        }
    }

    #[test]
    fn raw_hamiltonian_is_symmetric() {
        for g in [0.0, 0.5, 1.0, 2.7] {
            for a in [-4.0, 0.0, 3.3] {
                let b = BasisSpec::new(g, 20).unwrap();
                let raw = hamiltonian_raw(&b, a);
                let max = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for i in 0..20 {
                    for j in 0..20 {
                        assert!((raw[i * 20 + j] - raw[j * 20 + i]).abs() <= 1e-10 * max);
                    }
                }
            }
        }
    }

    #[test]
    fn scaled_assembly_matches_raw() {
        for g in [0.0, 0.5, 2.7] {
            let b = BasisSpec::new(g, 12).unwrap();
            let raw_s = overlap_matrix(&b);
            let raw_m = inverse_xi_matrix(&b);
            let raw_h = hamiltonian_matrix(&b, 1.5);
            let sys = ScaledSystem::new(&b);
            let h = sys.hamiltonian(1.5);
            for i in 0..12 {
                for j in 0..12 {
                    let d = (-0.5 * (b.ln_norm(i) + b.ln_norm(j))).exp();
                    let close = |x: DoubleDouble, y: f64| (x.to_f64() - y * d).abs() <= 1e-12 * (y * d).abs().max(1.0);
                    assert!(close(sys.s.get(i, j), raw_s.get(i, j)), "S g={g} ({i},{j})");
                    assert!(close(sys.inv_xi.get(i, j), raw_m.get(i, j)), "M g={g} ({i},{j})");
                    assert!(close(h.get(i, j), raw_h.get(i, j)), "H g={g} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn scaled_assembly_survives_large_gamma() {
        let sys = ScaledSystem::new(&BasisSpec::new(400.0, 30).unwrap());
        let h = sys.hamiltonian(2.0);
        for i in 0..30 {
            assert_eq!(sys.s.get(i, i), DoubleDouble::ONE);
            for j in 0..30 {
                assert!(h.get(i, j).to_f64().is_finite());
                assert!(sys.s.get(i, j).to_f64() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn oscillator_limit() {
        for g in [0.0, 0.5, 1.0] {
            let r = spectrum(&spec(g, 0.0), 20).unwrap();
            for nu in 0..=5 {
                let want = 4.0 * nu as f64 + 2.0 * g + 2.0;
                assert!((r.eigenvalues[nu] - want).abs() < 1e-9, "g={g} nu={nu}: {}", r.eigenvalues[nu]);
            }
        }
        let small = spectrum(&spec(0.0, 0.0), 6).unwrap();
        for (nu, want) in [2.0, 6.0, 10.0].iter().enumerate() {
            assert!((small.eigenvalues[nu] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn default_basis_has_no_spurious_levels() {
        for g in [0.0, 0.5, 2.0, 10.0] {
            let r = spectrum(&spec(g, 0.0), DEFAULT_BASIS_SIZE).unwrap();
            assert!(r.usable_n >= 20 && r.usable_n <= DEFAULT_BASIS_SIZE, "g={g}: {}", r.usable_n);
            for nu in 0..8 {
                let want = 4.0 * nu as f64 + 2.0 * g + 2.0;
                assert!((r.eigenvalues[nu] - want).abs() < 1e-9, "g={g} nu={nu}: {}", r.eigenvalues[nu]);
            }
        }
        // A looser tolerance keeps more of the basis.
        let tight = spectrum_with_tolerance(&spec(0.0, 1.0), 30, 1e-4).unwrap();
        let loose = spectrum_with_tolerance(&spec(0.0, 1.0), 30, 1.0).unwrap();
        assert!(tight.usable_n < loose.usable_n);
        assert!(spectrum_with_tolerance(&spec(0.0, 1.0), 30, 0.0).is_err());
    }

    #[test]
    fn exact_states_inside_the_basis() {
        let s2 = std::f64::consts::SQRT_2;
        for n in [2usize, 5, 12] {
            let r = spectrum(&spec(0.0, -s2), n).unwrap();
            assert!((r.eigenvalues[0] - 4.0).abs() < 1e-10, "N = {n}");
        }
        let r = spectrum(&spec(0.0, s2), 25).unwrap();
        assert!((r.eigenvalues[1] - 4.0).abs() < 1e-8);
        assert!(r.eigenvalues[0] < 4.0);
    }

    #[test]
    fn eigenvectors_are_overlap_normalized() {
        let r = spectrum(&spec(0.7, 1.1), 8).unwrap();
        let s = overlap_matrix(&BasisSpec::new(0.7, r.usable_n).unwrap());
        for c in &r.eigenvectors {
            // f64 evaluation of cᵀ S c is only good to ε Σ |c_i| S_ij |c_j|.
            let abs: Vec<f64> = c.iter().map(|v| v.abs()).collect();
            let bound = 64.0 * f64::EPSILON * s.bilinear(&abs, &abs);
            assert!((s.bilinear(c, c) - 1.0).abs() <= bound.max(1e-14));
        }
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn inverse_xi_expectations() {
        let r = spectrum(&spec(0.0, 0.0), 1).unwrap();
        assert!((expectation_inv_xi(&r, 0).unwrap() - SQRT_PI).abs() < 1e-14);
        assert!(matches!(expectation_inv_xi(&r, 1), Err(Error::LevelOutOfRange { .. })));

        // R = (1 + √2 ξ) e^{-ξ²/2}: ⟨1/ξ⟩ = 2(√π + √2) / (3 + √(2π)).
        let s2 = std::f64::consts::SQRT_2;
        let want = 2.0 * (SQRT_PI + s2) / (3.0 + (2.0 * std::f64::consts::PI).sqrt());
        assert!((want - 1.15740).abs() < 1e-5);
        let r = spectrum(&spec(0.0, -s2), 20).unwrap();
        assert!((expectation_inv_xi(&r, 0).unwrap() - want).abs() < 1e-10);
        for nu in 0..5 {
            assert!(expectation_inv_xi(&r, nu).unwrap() > 0.0);
        }
    }

    #[test]
    fn hellmann_feynman_examples() {
        let rep = hellmann_feynman_check(&spec(0.0, 0.0), 0, 20, 1e-4).unwrap();
        assert!((rep.fd_slope + SQRT_PI).abs() < 1e-6);
        assert!(rep.residual <= 1e-6);
        assert!(!rep.crossing_suspected);
        let rep = hellmann_feynman_check(&spec(0.0, -std::f64::consts::SQRT_2), 0, 20, 1e-4).unwrap();
        assert!((rep.fd_slope + 1.157_40).abs() < 1e-5);
        assert!(rep.fd_slope < 0.0);
        assert!(hellmann_feynman_check(&spec(0.0, 0.0), 0, 20, 0.0).is_err());
        assert!(hellmann_feynman_check(&spec(0.0, 0.0), 25, 20, 1e-4).is_err());
    }

    #[test]
    fn locator_known_pairs() {
        let s2 = std::f64::consts::SQRT_2;
        let m = truncation_point_locator(1, 0.0, 25).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m[0].a_root + s2).abs() < 1e-12 && m[0].level == 0);
        assert!((m[1].a_root - s2).abs() < 1e-12 && m[1].level == 1);
        assert!(m.iter().all(|x| x.mismatch.unwrap() < 1e-8));

        let m = truncation_point_locator(2, 0.0, 25).unwrap();
        assert!((m[2].a_root - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(m[2].level, 2);
        assert!((m[2].w_variational.unwrap() - 6.0).abs() < 1e-8);

        let m = truncation_point_locator(1, 1.0, 25).unwrap();
        assert!((m[0].a_root + 6f64.sqrt()).abs() < 1e-12);
        assert!((m[0].w_variational.unwrap() - 6.0).abs() < 1e-8);

        assert!(truncation_point_locator(4, 0.0, 6).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(BasisSpec::new(0.0, 0).is_err());
        assert!(spectrum(&spec(0.0, 0.0), 0).is_err());
        assert!(ProblemSpec::new(f64::NAN, 0.0).is_err());
    }
}
