use crate::dense::{dot, norm2, CholeskyAppend, LowerTriangular};
use crate::error::Result;
use crate::operators::{gram_column, LinearOperator};

/// Incrementally maintained factor `L` with `L·Lᵀ = VᵀAᵀA·V`.
pub trait ProjectedFactor {
    fn lower(&self) -> &LowerTriangular;

    /// Borders the factor with `v_new`; `false` means the new pivot is below
    /// the positive-definiteness threshold and nothing was appended.
    fn extend<A: LinearOperator + ?Sized>(&mut self, a: &A, basis: &[Vec<f64>], v_new: &[f64]) -> Result<bool>;
}

/// Bordered Cholesky from the Gram column `c = VᵀAᵀA·v`, `δ = ‖A·v‖²`.
///
/// The pivot test is relative: the append fails when `δ − lᵀl ≤ ε²·δ`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: LowerTriangular,
    eps: f64,
}

impl CholeskyFactor {
    pub fn new(eps: f64) -> Self {
        Self { l: LowerTriangular::new(), eps }
    }
}

impl ProjectedFactor for CholeskyFactor {
    fn lower(&self) -> &LowerTriangular {
        &self.l
    }

    fn extend<A: LinearOperator + ?Sized>(&mut self, a: &A, basis: &[Vec<f64>], v_new: &[f64]) -> Result<bool> {
        let (c, delta) = gram_column(a, basis, v_new)?;
        let outcome = self.l.cholesky_append(&c, delta, self.eps * delta.sqrt())?;
        Ok(matches!(outcome, CholeskyAppend::Appended))
    }
}

/// Modified Gram-Schmidt on `A·V = U·B`; the lower factor handed out is `Bᵀ`.
///
/// The append fails when `B_ii ≤ ε·‖A·v‖`.
#[derive(Debug, Clone)]
pub struct GramSchmidtFactor {
    u: Vec<Vec<f64>>,
    bt: LowerTriangular,
    eps: f64,
}

impl GramSchmidtFactor {
    pub fn new(eps: f64) -> Self {
        Self { u: Vec::new(), bt: LowerTriangular::new(), eps }
    }

    /// Orthonormal columns of `U`.
    pub fn u(&self) -> &[Vec<f64>] {
        &self.u
    }

    pub fn into_parts(self) -> (Vec<Vec<f64>>, LowerTriangular) {
        (self.u, self.bt)
    }
}

impl ProjectedFactor for GramSchmidtFactor {
    fn lower(&self) -> &LowerTriangular {
        &self.bt
    }

    fn extend<A: LinearOperator + ?Sized>(&mut self, a: &A, _basis: &[Vec<f64>], v_new: &[f64]) -> Result<bool> {
        let mut w = a.apply(v_new)?;
        let size = norm2(&w);
        let mut col = Vec::with_capacity(self.u.len());
        for uk in &self.u {
            let bki = dot(uk, &w);
            for (wi, ui) in w.iter_mut().zip(uk) {
                *wi -= bki * ui;
            }
            col.push(bki);
        }
        let bii = norm2(&w);
        if !(bii > self.eps * size) {
            return Ok(false);
        }
        w.iter_mut().for_each(|e| *e /= bii);
        self.bt.push_row(&col, bii)?;
        self.u.push(w);
        Ok(true)
    }
}

/// Mass of `BᵀB = L·Lᵀ` outside the tridiagonal band, relative to its
/// Frobenius norm. Approaches zero as the outer iteration settles into the
/// unconstrained Krylov regime.
pub fn off_tridiagonal_ratio(l: &LowerTriangular) -> f64 {
    let g = l.gram();
    let k = g.nrows();
    let mut off = 0.0;
    let mut total = 0.0;
    for j in 0..k {
        for i in 0..k {
            let v = g[(i, j)] * g[(i, j)];
            total += v;
            if i.abs_diff(j) > 1 {
                off += v;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (off / total).sqrt()
    }
}
