//! Dense symmetric linear algebra: Cholesky factorization, cyclic Jacobi
//! diagonalization and the reduction of `H c = λ S c` to standard form.
//!
//! Matrices are generic over [`Scalar`] so that badly conditioned overlap
//! matrices can be factored in double-double while the final symmetric
//! eigenproblem runs in `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 50;
/// Sweeps stop once the off-diagonal Frobenius norm is below this fraction of ‖A‖_F.
pub const JACOBI_REL_TOL: f64 = 1e-14;

/// Real field used for matrix storage and factorization.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Scalar for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::from_f64(0.0), |acc, (&x, &y)| acc + x * y)
}

/// Dense symmetric matrix stored row-major. Entries `(i, j)` and `(j, i)` are
/// bitwise identical.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T: Scalar = f64> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Builds the matrix from its upper triangle; `f(i, j)` is called for `i <= j` only.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        let mut data = vec![T::from_f64(0.0); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds the matrix from a full row-major array, replacing each off-diagonal
    /// pair by its average.
    pub fn symmetrized(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(data.len(), dim * dim));
        }
        let half = T::from_f64(0.5);
        let mut data = data;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = half * (data[i * dim + j] + data[j * dim + i]);
                data[i * dim + j] = avg;
                data[j * dim + i] = avg;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_upper(dim, |i, j| T::from_f64(if i == j { 1.0 } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Leading `m × m` principal block.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.dim {
            return Err(Error::invalid(format!(
                "leading block size {m} outside 1..={}",
                self.dim
            )));
        }
        Self::from_upper(m, |i, j| self.get(i, j))
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.dim).map(|i| dot(self.row(i), x)).collect()
    }

    /// Bilinear form `xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        dot(x, &self.mul_vec(y))
    }

    /// `D A D` with `D = diag(d)`.
    pub fn congruent_diag(&self, d: &[T]) -> Self {
        let n = self.dim;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = data[i * n + j] * d[i] * d[j];
            }
        }
        Self { dim: n, data }
    }
}

impl SymMatrix<f64> {
    /// Builds the matrix from rows, requiring exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(row.len(), dim));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}

/// Lower-triangular matrix with a strictly positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular<T: Scalar = f64> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> LowerTriangular<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if j > i {
            T::from_f64(0.0)
        } else {
            self.data[i * self.dim + j]
        }
    }

    /// Builds a factor from rows; entries above the diagonal must be zero.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let zero = T::from_f64(0.0);
        let mut data = vec![zero; dim * dim];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(row.len(), dim));
            }
            for (j, &v) in row.iter().enumerate() {
                if j > i && v != zero {
                    return Err(Error::invalid("entry above the diagonal"));
                }
                data[i * dim + j] = v;
            }
        }
        Ok(Self { dim, data })
    }

    /// `L Lᵀ`.
    pub fn gram(&self) -> SymMatrix<T> {
        SymMatrix::from_upper(self.dim, |i, j| {
            let k = i.min(j) + 1;
            dot(&self.data[i * self.dim..i * self.dim + k], &self.data[j * self.dim..j * self.dim + k])
        })
        .expect("factor dimension is positive")
    }

    /// Solves `L x = b` in place.
    pub fn solve_lower(&self, b: &mut [T]) {
        let n = self.dim;
        for i in 0..n {
            let s = dot(&self.data[i * n..i * n + i], &b[..i]);
            b[i] = (b[i] - s) / self.data[i * n + i];
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn solve_upper_transposed(&self, b: &mut [T]) {
        let n = self.dim;
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s = s - self.data[k * n + i] * b[k];
            }
            b[i] = s / self.data[i * n + i];
        }
    }
}

impl<T: Scalar> LowerTriangular<T> {
    /// `‖L_m⁻¹‖_F²` for every leading block `m = 1..=n`.
    ///
    /// For `S = L Lᵀ` this brackets `1/λ_min(S_m)` within a factor `m`, and
    /// the leading blocks of `L` are exactly the factors of the leading blocks of `S`.
    pub fn inverse_norms_sq(&self) -> Vec<f64> {
        let n = self.dim;
        let zero = T::from_f64(0.0);
        let mut out = Vec::with_capacity(n);
        let mut total = 0.0;
        let mut row = vec![zero; n];
        for i in 0..n {
            // Row i of L⁻¹ solves xᵀ L = e_iᵀ, nonzero in columns 0..=i.
            row[..=i].iter_mut().for_each(|v| *v = zero);
            row[i] = T::from_f64(1.0) / self.data[i * n + i];
            for j in (0..i).rev() {
                let mut acc = zero;
                for k in (j + 1)..=i {
                    acc = acc + row[k] * self.data[k * n + j];
                }
                row[j] = -acc / self.data[j * n + j];
            }
            total += row[..=i].iter().map(|v| v.to_f64() * v.to_f64()).sum::<f64>();
            out.push(total);
        }
        out
    }
}

/// Cholesky factorization `S = L Lᵀ`.
///
/// Fails with [`Error::NotPositiveDefinite`] at the first pivot that is not
/// strictly positive; the leading block above that index is positive definite.
pub fn cholesky<T: Scalar>(s: &SymMatrix<T>) -> Result<LowerTriangular<T>> {
    cholesky_with_floor(s, 0.0)
}

/// Cholesky factorization that also rejects pivots `≤ floor · S_jj`.
///
/// A pivot is the squared distance of basis vector `j` from the span of the
/// previous ones, relative to its own norm. Once it reaches the rounding
/// level of `T` the factor carries no information, so `floor` should sit a few
/// orders of magnitude above that level.
pub fn cholesky_with_floor<T: Scalar>(s: &SymMatrix<T>, floor: f64) -> Result<LowerTriangular<T>> {
    let n = s.dim();
    let zero = T::from_f64(0.0);
    let mut l = vec![zero; n * n];
    for j in 0..n {
        let d = s.get(j, j) - dot(&l[j * n..j * n + j], &l[j * n..j * n + j]);
        let limit = T::from_f64(floor) * s.get(j, j);
        if !(d > zero) || !(d > limit) {
            return Err(Error::NotPositiveDefinite {
                index: j,
                pivot: d.to_f64(),
            });
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let v = s.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
            l[i * n + j] = v / djj;
        }
    }
    Ok(LowerTriangular { dim: n, data: l })
}

/// Eigenvalues in ascending order with matching eigenvectors.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    fn sorted(values: Vec<f64>, vectors: Vec<Vec<f64>>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        Eigen {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors: order.iter().map(|&i| vectors[i].clone()).collect(),
        }
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
pub fn sym_eigen(a: &SymMatrix) -> Result<Eigen> {
    let n = a.dim();
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();
    let mut off = off_diagonal_norm(&m, n);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&m, n);
    }
    let values = (0..n).map(|i| m[i * n + i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|k| v[k * n + j]).collect()).collect();
    Ok(Eigen::sorted(values, vectors))
}

/// The pencil `(H, S)` brought to the standard symmetric form
/// `C = L⁻¹ D H D L⁻ᵀ`, where `D = diag(S)^{-1/2}` and `L Lᵀ = D S D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPencil<T: Scalar = f64> {
    scale: Vec<T>,
    factor: LowerTriangular<T>,
    /// `C`, rounded to `f64`.
    pub reduced: SymMatrix<f64>,
}

impl<T: Scalar> ReducedPencil<T> {
    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn factor(&self) -> &LowerTriangular<T> {
        &self.factor
    }

    /// `L⁻¹ D M D L⁻ᵀ` for another symmetric operator `M` in the same basis.
    pub fn transform(&self, m: &SymMatrix<T>) -> Result<SymMatrix<f64>> {
        let n = self.dim();
        if m.dim() != n {
            return Err(Error::DimensionMismatch(m.dim(), n));
        }
        let scaled = m.congruent_diag(&self.scale);
        // X = L⁻¹ M, then C = L⁻¹ Xᵀ.
        let mut x = vec![T::from_f64(0.0); n * n];
        let mut col = vec![T::from_f64(0.0); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = scaled.get(i, j);
            }
            self.factor.solve_lower(&mut col);
            for i in 0..n {
                x[i * n + j] = col[i];
            }
        }
        let mut c = vec![T::from_f64(0.0); n * n];
        for j in 0..n {
            col.copy_from_slice(&x[j * n..(j + 1) * n]);
            self.factor.solve_lower(&mut col);
            for i in 0..n {
                c[i * n + j] = col[i];
            }
        }
        Ok(SymMatrix::symmetrized(n, c)?.to_f64())
    }

    /// Maps an eigenvector `y` of `C` back to `c = D L⁻ᵀ y`, so that `cᵀ S c = yᵀ y`.
    pub fn back_transform(&self, y: &[f64]) -> Vec<T> {
        let mut c: Vec<T> = y.iter().map(|&v| T::from_f64(v)).collect();
        self.factor.solve_upper_transposed(&mut c);
        c.iter_mut().zip(&self.scale).for_each(|(v, &d)| *v = *v * d);
        c
    }
}

/// Scales, factors and reduces `H c = λ S c`; pivots `≤ pivot_floor` (relative
/// to the unit diagonal of `D S D`) count as loss of positive definiteness.
pub fn reduce_pencil<T: Scalar>(h: &SymMatrix<T>, s: &SymMatrix<T>, pivot_floor: f64) -> Result<ReducedPencil<T>> {
    let n = s.dim();
    if h.dim() != n {
        return Err(Error::DimensionMismatch(h.dim(), n));
    }
    let zero = T::from_f64(0.0);
    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let sii = s.get(i, i);
        if !(sii > zero) {
            return Err(Error::NotPositiveDefinite {
                index: i,
                pivot: sii.to_f64(),
            });
        }
        scale.push(T::from_f64(1.0) / sii.sqrt());
    }
    let factor = cholesky_with_floor(&s.congruent_diag(&scale), pivot_floor)?;
    let mut pencil = ReducedPencil {
        scale,
        factor,
        reduced: SymMatrix::identity(n)?,
    };
    pencil.reduced = pencil.transform(h)?;
    Ok(pencil)
}

/// Solves `H c = λ S c` for symmetric `H` and positive definite `S`.
///
/// Both matrices are scaled by `D = diag(S)^{-1/2}`, the scaled overlap is
/// Cholesky-factored, and `L⁻¹ (DHD) L⁻ᵀ` is diagonalized. Eigenvectors are
/// returned in the original basis with `cᵀ S c = 1`.
pub fn generalized_eigen(h: &SymMatrix, s: &SymMatrix) -> Result<Eigen> {
    let pencil = reduce_pencil(h, s, 0.0)?;
    let eig = sym_eigen(&pencil.reduced)?;
    let vectors = eig.vectors.iter().map(|y| pencil.back_transform(y)).collect();
    Ok(Eigen {
        values: eig.values,
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        // Gram-Schmidt on random columns.
        let mut q: Vec<Vec<f64>> = Vec::new();
        while q.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for u in &q {
                let p: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= p * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-3 {
                q.push(v.into_iter().map(|a| a / norm).collect());
            }
        }
        q
    }

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
        SymMatrix::from_upper(n, |_, _| rng.gen_range(-1.0..1.0)).unwrap()
    }

    fn check_pairs(a: &SymMatrix, eig: &Eigen) {
        let norm = a.frobenius_norm();
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            let av = a.mul_vec(v);
            let r = av.iter().zip(v).map(|(x, y)| (x - lambda * y).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-11 * norm.max(1.0), "residual {r}");
        }
        for (i, u) in eig.vectors.iter().enumerate() {
            for (j, v) in eig.vectors.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() <= 1e-12, "orthonormality ({i},{j}) = {d}");
            }
        }
    }

    #[test]
    fn inverse_norms_of_leading_blocks() {
        let l = LowerTriangular::from_rows(&[vec![2.0, 0.0], vec![1.0, 4.0]]).unwrap();
        // L⁻¹ = [[1/2, 0], [-1/8, 1/4]]
        let norms = l.inverse_norms_sq();
        assert!((norms[0] - 0.25).abs() < 1e-15);
        assert!((norms[1] - (0.25 + 1.0 / 64.0 + 1.0 / 16.0)).abs() < 1e-15);
        let s = SymMatrix::from_rows(&[vec![4.0, 2.0, 0.5], vec![2.0, 5.0, 1.0], vec![0.5, 1.0, 3.0]]).unwrap();
        let f = cholesky(&s).unwrap();
        let norms = f.inverse_norms_sq();
        // ‖L⁻¹‖_F² = trace(S⁻¹) for the full factor.
        let mut trace_inv = 0.0;
        for k in 0..3 {
            let mut e = vec![0.0; 3];
            e[k] = 1.0;
            f.solve_lower(&mut e);
            f.solve_upper_transposed(&mut e);
            trace_inv += e[k];
        }
        assert!((norms[2] - trace_inv).abs() < 1e-14);
    }

    #[test]
    fn cholesky_identity_and_2x2() {
        let id = SymMatrix::<f64>::identity(3).unwrap();
        let l = cholesky(&id).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        let s = SymMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        let l = cholesky(&s).unwrap();
        assert_eq!([l.get(0, 0), l.get(1, 0), l.get(1, 1), l.get(0, 1)], [2.0, 1.0, 2.0, 0.0]);
    }

    #[test]
    fn cholesky_reports_failing_pivot() {
        let s = SymMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        match cholesky(&s) {
            Err(Error::NotPositiveDefinite { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(SymMatrix::<f64>::identity(0).is_err());
        let m = SymMatrix::symmetrized(2, vec![1.0, 2.0, 4.0, 1.0]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }

    #[test]
    fn eigen_small_cases() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] - 3.0).abs() < 1e-15);
        check_pairs(&a, &e);

        let d = SymMatrix::from_rows(&[
            vec![5.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        let e = sym_eigen(&d).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0, 5.0]);
        assert_eq!(e.vectors[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(e.vectors[1], vec![0.0, 0.0, 1.0]);
        assert_eq!(e.vectors[2], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn eigen_recovers_constructed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 5, 12] {
            let q = random_orthogonal(n, &mut rng);
            let lambdas: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let a = SymMatrix::from_upper(n, |i, j| {
                (0..n).map(|k| q[k][i] * lambdas[k] * q[k][j]).sum()
            })
            .unwrap();
            let e = sym_eigen(&a).unwrap();
            for (got, want) in e.values.iter().zip(&lambdas) {
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
            check_pairs(&a, &e);
        }
    }

    #[test]
    fn generalized_reduces_to_standard() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 4, 9] {
            let a = random_symmetric(n, &mut rng);
            let id = SymMatrix::identity(n).unwrap();
            let g = generalized_eigen(&a, &id).unwrap();
            let s = sym_eigen(&a).unwrap();
            for (x, y) in g.values.iter().zip(&s.values) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generalized_with_h_twice_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let b: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let s = SymMatrix::from_upper(n, |i, j| {
            (0..n).map(|k| b[i][k] * b[j][k]).sum::<f64>() + if i == j { n as f64 } else { 0.0 }
        })
        .unwrap();
        let h = SymMatrix::from_upper(n, |i, j| 2.0 * s.get(i, j)).unwrap();
        let e = generalized_eigen(&h, &s).unwrap();
        for v in &e.values {
            assert!((v - 2.0).abs() < 1e-12);
        }
        for c in &e.vectors {
            assert!((s.bilinear(c, c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generalized_dimension_mismatch() {
        let a = SymMatrix::identity(2).unwrap();
        let b = SymMatrix::identity(3).unwrap();
        assert_eq!(generalized_eigen(&a, &b), Err(Error::DimensionMismatch(2, 3)));
    }

    proptest! {
        #[test]
        fn cholesky_recovers_factor(seed in any::<u64>(), n in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => rng.gen_range(-1.0..1.0),
                    std::cmp::Ordering::Equal => rng.gen_range(1.0..2.0),
                    std::cmp::Ordering::Greater => 0.0,
                }).collect())
                .collect();
            let l = LowerTriangular::from_rows(&rows).unwrap();
            let back = cholesky(&l.gram()).unwrap();
            for i in 0..n {
                for j in 0..=i {
                    prop_assert!((back.get(i, j) - l.get(i, j)).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn eigen_trace_and_determinant(seed in any::<u64>(), n in 1usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_symmetric(n, &mut rng);
            let e = sym_eigen(&a).unwrap();
            let norm = a.frobenius_norm();
            prop_assert!((e.values.iter().sum::<f64>() - a.trace()).abs() <= 1e-11 * norm.max(1.0));
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            check_pairs(&a, &e);

            // Shift to SPD and compare the eigenvalue product with det = Π L_ii².
            let shift = norm + 1.0;
            let spd = SymMatrix::from_upper(n, |i, j| a.get(i, j) + if i == j { shift } else { 0.0 }).unwrap();
            let l = cholesky(&spd).unwrap();
            let log_det: f64 = (0..n).map(|i| 2.0 * l.get(i, i).ln()).sum();
            let log_prod: f64 = e.values.iter().map(|v| (v + shift).ln()).sum();
            prop_assert!((log_det - log_prod).abs() <= 1e-11 * n as f64);
        }

        #[test]
        fn generalized_identity_matches_standard(seed in any::<u64>(), n in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_symmetric(n, &mut rng);
            let g = generalized_eigen(&a, &SymMatrix::identity(n).unwrap()).unwrap();
            let s = sym_eigen(&a).unwrap();
            for (x, y) in g.values.iter().zip(&s.values) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}
