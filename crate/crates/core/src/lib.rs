//! Matrix-free solver for large sparse bounded-variable least squares.
//!
//! The solver minimizes `½‖Ax − b‖²` subject to `ℓ ≤ x ≤ u` by projecting onto
//! a growing basis of KKT residuals. Each projected problem is a small dense
//! convex QP, solved by a warm-started primal active-set method that keeps a
//! QR factorization of the working-set constraints up to date. The projected
//! Hessian is factored incrementally, either by bordered Cholesky or by
//! modified Gram-Schmidt on `AV`.
//!
//! Layout:
//! - [`dense`]: triangular solves, bordered Cholesky, QR append/remove.
//! - [`operators`]: the [`LinearOperator`] contract, CSR matrices, Kronecker
//!   operators, the 2D Laplacian, ILUT preconditioning and Matrix Market IO.
//! - [`qpas`]: the inner active-set QP solver.
//! - [`resqpass`]: the outer subspace iteration.
//! - [`reference`]: LSQR, a brute-force BVLS oracle and the KKT checker.
//! - [`experiments`]: instance generators, NMF/ALS and the benchmark runner.

pub mod dense;
pub mod error;
pub mod experiments;
pub mod operators;
pub mod qpas;
pub mod reference;
pub mod resqpass;

pub use dense::{DenseMatrix, LowerTriangular, QRFactors};
pub use error::{Error, Result};
pub use operators::{IdentityPreconditioner, Ilut, LinearOperator, Preconditioner, SparseMatrixCsr};
pub use qpas::{qpas_solve, QpProblem, QpasOptions, QpasResult, QpasTermination};
pub use reference::KktReport;
pub use resqpass::{
    solve, BvlsProblem, ConvergenceHistory, Factorization, InnerExitStats, PreconditionerKind, SolveOutput,
    SolverConfig, Termination, ToleranceMode,
};
