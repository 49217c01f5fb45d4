//! Linear operators with forward and adjoint application, and preconditioners.

mod csr;
mod ilut;
pub mod io;
mod kron;

pub use csr::{laplacian_2d, SparseMatrixCsr};
pub use ilut::Ilut;
pub use kron::{kron_left_apply, kron_right_apply, KronLeft, KronRight};

use crate::dense::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// An `m × n` operator that can be applied forward and as its adjoint.
///
/// Implementations must be deterministic and satisfy
/// `⟨A·v, w⟩ = ⟨v, Aᵀ·w⟩` up to roundoff.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `out ← A·v`. Panics on dimension mismatch.
    fn apply_into(&self, v: &[f64], out: &mut [f64]);

    /// `out ← Aᵀ·w`. Panics on dimension mismatch.
    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]);

    /// Explicit sparse form, when the operator has one. Needed to build
    /// preconditioners from `AᵀA`.
    fn as_csr(&self) -> Option<&SparseMatrixCsr> {
        None
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.ncols() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), got: v.len() });
        }
        let mut out = vec![0.0; self.nrows()];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    fn apply_adjoint(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), got: w.len() });
        }
        let mut out = vec![0.0; self.ncols()];
        self.apply_adjoint_into(w, &mut out);
        Ok(out)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply_into(v, out)
    }
    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        (**self).apply_adjoint_into(w, out)
    }
    fn as_csr(&self) -> Option<&SparseMatrixCsr> {
        (**self).as_csr()
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply_into(v, out)
    }
    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        (**self).apply_adjoint_into(w, out)
    }
    fn as_csr(&self) -> Option<&SparseMatrixCsr> {
        (**self).as_csr()
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        DenseMatrix::nrows(self)
    }
    fn ncols(&self) -> usize {
        DenseMatrix::ncols(self)
    }
    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.matvec(v));
    }
    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.tr_matvec(w));
    }
}

/// Border of the projected normal matrix `VᵀAᵀA·V` for a new basis vector:
/// returns `c = VᵀAᵀ(A·v_new)` and `δ = ‖A·v_new‖²`, applying `A` once.
pub fn gram_column<A: LinearOperator + ?Sized>(a: &A, basis: &[Vec<f64>], v_new: &[f64]) -> Result<(Vec<f64>, f64)> {
    let av = a.apply(v_new)?;
    let delta = dot(&av, &av);
    if basis.is_empty() {
        return Ok((Vec::new(), delta));
    }
    let atav = a.apply_adjoint(&av)?;
    let mut c = Vec::with_capacity(basis.len());
    for v in basis {
        if v.len() != atav.len() {
            return Err(Error::DimensionMismatch { expected: atav.len(), got: v.len() });
        }
        c.push(dot(v, &atav));
    }
    Ok((c, delta))
}

/// Approximate inverse `M⁻¹` applied to residuals.
pub trait Preconditioner {
    fn order(&self) -> usize;
    fn solve(&self, r: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityPreconditioner {
    pub n: usize,
}

impl Preconditioner for IdentityPreconditioner {
    fn order(&self) -> usize {
        self.n
    }
    fn solve(&self, r: &[f64]) -> Vec<f64> {
        r.to_vec()
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for &T {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn solve(&self, r: &[f64]) -> Vec<f64> {
        (**self).solve(r)
    }
}
