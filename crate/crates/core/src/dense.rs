//! Small dense kernels: vector helpers, a column-major matrix, a row-extendable
//! lower-triangular factor, and an explicit-Q QR factorization that supports
//! appending and removing columns.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y ← y + alpha·x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= alpha);
}

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![0.0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch { expected: nrows * ncols, got: data.len() });
        }
        Ok(Self { nrows, ncols, data })
    }

    /// Builds a matrix from row slices. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for j in 0..self.ncols {
            for i in 0..self.nrows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.ncols, "matvec dimension mismatch");
        let mut out = vec![0.0; self.nrows];
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0.0 {
                axpy(vj, self.col(j), &mut out);
            }
        }
        out
    }

    pub fn tr_matvec(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.nrows, "tr_matvec dimension mismatch");
        (0..self.ncols).map(|j| dot(self.col(j), w)).collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let mut out = DenseMatrix::zeros(self.nrows, other.ncols);
        for j in 0..other.ncols {
            let col = self.matvec(other.col(j));
            out.col_mut(j).copy_from_slice(&col);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[j * self.nrows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[j * self.nrows + i]
    }
}

/// Outcome of a bordered Cholesky update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CholeskyAppend {
    Appended,
    /// `δ − lᵀl` fell to or below the threshold; the factor is left unchanged.
    PosdefLost {
        pivot_squared: f64,
    },
}

/// Lower-triangular matrix stored row by row, so that bordering the factored
/// matrix only appends one row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LowerTriangular {
    rows: Vec<Vec<f64>>,
}

impl LowerTriangular {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| {
                let mut r = vec![0.0; i + 1];
                r[i] = 1.0;
                r
            })
            .collect();
        Self { rows }
    }

    /// Takes the lower triangle of a dense square matrix. Entries above the
    /// diagonal are ignored.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let rows = (0..m.nrows()).map(|i| (0..=i).map(|j| m[(i, j)]).collect()).collect();
        Ok(Self { rows })
    }

    /// Plain Cholesky of a dense SPD matrix, built by repeated bordering.
    pub fn factor(g: &DenseMatrix, eps: f64) -> Result<Option<Self>> {
        let mut l = Self::new();
        for k in 0..g.nrows() {
            let c: Vec<f64> = (0..k).map(|i| g[(i, k)]).collect();
            if let CholeskyAppend::PosdefLost { .. } = l.cholesky_append(&c, g[(k, k)], eps)? {
                return Ok(None);
            }
        }
        Ok(Some(l))
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.rows[i][j]
        }
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.rows[i][i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Appends the row `(lᵀ, diag)`.
    pub fn push_row(&mut self, l: &[f64], diag: f64) -> Result<()> {
        let k = self.order();
        if l.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: l.len() });
        }
        let mut row = Vec::with_capacity(k + 1);
        row.extend_from_slice(l);
        row.push(diag);
        self.rows.push(row);
        Ok(())
    }

    fn check_rhs(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), got: c.len() });
        }
        Ok(())
    }

    /// Solves `L·x = c`.
    pub fn forward_solve(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_rhs(c)?;
        let mut x = c.to_vec();
        for i in 0..self.order() {
            let row = &self.rows[i];
            let d = row[i];
            if d == 0.0 {
                return Err(Error::SingularFactor(i));
            }
            let s = dot(&row[..i], &x[..i]);
            x[i] = (x[i] - s) / d;
        }
        Ok(x)
    }

    /// Solves `Lᵀ·x = c`.
    pub fn backward_solve(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_rhs(c)?;
        let mut x = c.to_vec();
        for i in (0..self.order()).rev() {
            let d = self.rows[i][i];
            if d == 0.0 {
                return Err(Error::SingularFactor(i));
            }
            x[i] /= d;
            let xi = x[i];
            for (xj, lij) in x[..i].iter_mut().zip(&self.rows[i][..i]) {
                *xj -= lij * xi;
            }
        }
        Ok(x)
    }

    /// `Lᵀ·x`.
    pub fn transpose_mul(&self, x: &[f64]) -> Result<Vec<f64>> {
        let k = self.order();
        if x.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: x.len() });
        }
        let mut out = vec![0.0; k];
        for (row, &xi) in self.rows.iter().zip(x) {
            axpy(xi, row, &mut out[..row.len()]);
        }
        Ok(out)
    }

    /// Solves `L·Lᵀ·x = c`.
    pub fn solve_normal(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.backward_solve(&self.forward_solve(c)?)
    }

    /// Borders the factored matrix `G` with column `c` and corner `delta`.
    ///
    /// The new last row is `(lᵀ, √(δ − lᵀl))` with `L·l = c`. If `δ − lᵀl ≤ eps²`
    /// the bordered matrix is not (numerically) positive definite: the factor
    /// is left untouched and `PosdefLost` is returned.
    pub fn cholesky_append(&mut self, c: &[f64], delta: f64, eps: f64) -> Result<CholeskyAppend> {
        let l = self.forward_solve(c)?;
        let pivot_squared = delta - dot(&l, &l);
        if !(pivot_squared > eps * eps) {
            return Ok(CholeskyAppend::PosdefLost { pivot_squared });
        }
        self.push_row(&l, pivot_squared.sqrt())?;
        Ok(CholeskyAppend::Appended)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let k = self.order();
        let mut m = DenseMatrix::zeros(k, k);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `L·Lᵀ` as a dense matrix.
    pub fn gram(&self) -> DenseMatrix {
        let k = self.order();
        let mut g = DenseMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let v = dot(&self.rows[i][..=j], &self.rows[j][..=j]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }
}

/// QR factorization `Q·R = X` of a tall matrix whose columns are appended and
/// removed one at a time. `Q` is stored explicitly with orthonormal columns;
/// column `j` of `R` stores its `j + 1` upper-triangular entries.
#[derive(Debug, Clone, PartialEq)]
pub struct QRFactors {
    nrows: usize,
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

/// Relative size of the new diagonal of `R` below which an appended column
/// is treated as dependent.
pub const QR_DEGENERATE_TOL: f64 = 1e-8;

impl QRFactors {
    pub fn new(nrows: usize) -> Self {
        Self { nrows, q: Vec::new(), r: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of tracked columns.
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn q_col(&self, j: usize) -> &[f64] {
        &self.q[j]
    }

    pub fn r(&self, i: usize, j: usize) -> f64 {
        if i > j {
            0.0
        } else {
            self.r[j][i]
        }
    }

    pub fn q_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.nrows, self.len());
        for (j, col) in self.q.iter().enumerate() {
            m.col_mut(j).copy_from_slice(col);
        }
        m
    }

    pub fn r_dense(&self) -> DenseMatrix {
        let t = self.len();
        let mut m = DenseMatrix::zeros(t, t);
        for (j, col) in self.r.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Appends a column using classical Gram-Schmidt with one
    /// reorthogonalization pass.
    pub fn append_column(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: x.len() });
        }
        let xnorm = norm2(x);
        let mut w = x.to_vec();
        let mut coeffs = vec![0.0; self.len()];
        for _ in 0..2 {
            for (j, qj) in self.q.iter().enumerate() {
                let h = dot(qj, &w);
                coeffs[j] += h;
                axpy(-h, qj, &mut w);
            }
        }
        let rho = norm2(&w);
        if xnorm == 0.0 || rho <= QR_DEGENERATE_TOL * xnorm {
            return Err(Error::DegenerateColumn);
        }
        scale(1.0 / rho, &mut w);
        coeffs.push(rho);
        self.q.push(w);
        self.r.push(coeffs);
        Ok(())
    }

    /// Removes column `j` and restores `R` to upper-triangular form with a
    /// sweep of Givens rotations, which are also applied to `Q`.
    pub fn remove_column(&mut self, j: usize) -> Result<()> {
        let t = self.len();
        if j >= t {
            return Err(Error::IndexOutOfRange { index: j, len: t });
        }
        self.r.remove(j);
        // Columns j.. now carry one subdiagonal entry each.
        for c in j..t - 1 {
            let a = self.r[c][c];
            let b = self.r[c][c + 1];
            let h = a.hypot(b);
            if h == 0.0 {
                self.r[c].truncate(c + 1);
                continue;
            }
            let (cs, sn) = (a / h, b / h);
            for col in self.r[c..].iter_mut() {
                let (ri, rk) = (col[c], col[c + 1]);
                col[c] = cs * ri + sn * rk;
                col[c + 1] = -sn * ri + cs * rk;
            }
            self.r[c][c + 1] = 0.0;
            self.r[c].truncate(c + 1);
            let (left, right) = self.q.split_at_mut(c + 1);
            let (qa, qb) = (&mut left[c], &mut right[0]);
            for (u, v) in qa.iter_mut().zip(qb.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = cs * x + sn * y;
                *v = -sn * x + cs * y;
            }
        }
        self.q.pop();
        Ok(())
    }

    /// Solves `Rᵀ·R·x = c`.
    pub fn solve_normal(&self, c: &[f64]) -> Result<Vec<f64>> {
        let t = self.len();
        if c.len() != t {
            return Err(Error::DimensionMismatch { expected: t, got: c.len() });
        }
        // Rᵀ w = c
        let mut w = c.to_vec();
        for i in 0..t {
            let s = dot(&self.r[i][..i], &w[..i]);
            let d = self.r[i][i];
            if d == 0.0 {
                return Err(Error::SingularFactor(i));
            }
            w[i] = (w[i] - s) / d;
        }
        self.solve_upper(&w)
    }

    /// Solves `R·x = c`.
    pub fn solve_upper(&self, c: &[f64]) -> Result<Vec<f64>> {
        let t = self.len();
        if c.len() != t {
            return Err(Error::DimensionMismatch { expected: t, got: c.len() });
        }
        let mut w = c.to_vec();
        for i in (0..t).rev() {
            let d = self.r[i][i];
            if d == 0.0 {
                return Err(Error::SingularFactor(i));
            }
            w[i] /= d;
            let wi = w[i];
            for (wk, rki) in w[..i].iter_mut().zip(&self.r[i][..i]) {
                *wk -= rki * wi;
            }
        }
        Ok(w)
    }

    /// `Qᵀ·v`.
    pub fn q_tr_mul(&self, v: &[f64]) -> Vec<f64> {
        self.q.iter().map(|qj| dot(qj, v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lower(rows: &[&[f64]]) -> LowerTriangular {
        let mut l = LowerTriangular::new();
        for r in rows {
            let (d, off) = r.split_last().unwrap();
            l.push_row(off, *d).unwrap();
        }
        l
    }

    #[test]
    fn forward_backward_trivial() {
        let l = lower(&[&[2.0]]);
        assert_eq!(l.forward_solve(&[4.0]).unwrap(), vec![2.0]);
        assert_eq!(l.backward_solve(&[4.0]).unwrap(), vec![2.0]);
        let id = LowerTriangular::identity(3);
        assert_eq!(id.forward_solve(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(id.backward_solve(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn singular_and_mismatch() {
        let l = lower(&[&[1.0], &[1.0, 0.0]]);
        assert!(matches!(l.forward_solve(&[1.0, 1.0]), Err(Error::SingularFactor(1))));
        assert!(matches!(l.backward_solve(&[1.0, 1.0]), Err(Error::SingularFactor(1))));
        assert!(matches!(l.forward_solve(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn cholesky_append_two_by_two() {
        let mut l = lower(&[&[2.0]]);
        assert_eq!(l.cholesky_append(&[2.0], 5.0, 1e-12).unwrap(), CholeskyAppend::Appended);
        assert_eq!(l.to_dense(), DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 2.0]]).unwrap());
        assert_eq!(l.gram(), DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap());
    }

    #[test]
    fn cholesky_append_rank_deficient_border() {
        let mut l = lower(&[&[1.0]]);
        let out = l.cholesky_append(&[1.0], 1.0, 1e-12).unwrap();
        assert_eq!(out, CholeskyAppend::PosdefLost { pivot_squared: 0.0 });
        assert_eq!(l.order(), 1);
    }

    #[test]
    fn qr_append_normalizes() {
        let mut f = QRFactors::new(2);
        f.append_column(&[3.0, 4.0]).unwrap();
        assert!((f.q_col(0)[0] - 0.6).abs() < 1e-15 && (f.q_col(0)[1] - 0.8).abs() < 1e-15);
        assert!((f.r(0, 0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn qr_append_orthogonal() {
        let mut f = QRFactors::new(2);
        f.append_column(&[1.0, 0.0]).unwrap();
        f.append_column(&[0.0, 1.0]).unwrap();
        assert_eq!(f.q_dense(), DenseMatrix::identity(2));
        assert_eq!(f.r_dense(), DenseMatrix::identity(2));
    }

    #[test]
    fn qr_degenerate_and_range() {
        let mut f = QRFactors::new(3);
        f.append_column(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(f.append_column(&[2.0, 4.0, 6.0]), Err(Error::DegenerateColumn)));
        assert!(matches!(f.append_column(&[0.0, 0.0, 0.0]), Err(Error::DegenerateColumn)));
        assert!(matches!(f.remove_column(1), Err(Error::IndexOutOfRange { .. })));
        f.remove_column(0).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn qr_solve_normal_matches_gram() {
        let mut f = QRFactors::new(3);
        f.append_column(&[1.0, 1.0, 0.0]).unwrap();
        f.append_column(&[0.0, 1.0, 2.0]).unwrap();
        // XᵀX = [[2,1],[1,5]]
        let x = f.solve_normal(&[3.0, 6.0]).unwrap();
        assert!((2.0 * x[0] + x[1] - 3.0).abs() < 1e-13);
        assert!((x[0] + 5.0 * x[1] - 6.0).abs() < 1e-13);
    }
}
