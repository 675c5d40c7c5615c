//! Numerical kernel: log-gamma, double-double arithmetic, dense symmetric
//! eigensolvers and exact polynomial root isolation.

mod dd;
mod gamma;
mod linalg;
mod poly;

pub use dd::DoubleDouble;
pub use gamma::{gamma_half_ratio, log_gamma};
pub use linalg::{
    cholesky, cholesky_with_floor, generalized_eigen, reduce_pencil, sym_eigen, Eigen,
    LowerTriangular, ReducedPencil, Scalar, SymMatrix, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL,
};
pub use poly::{poly_real_roots, RationalPoly, RootSet, DEFAULT_ROOT_TOL};
