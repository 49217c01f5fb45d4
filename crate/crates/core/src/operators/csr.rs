use super::LinearOperator;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl SparseMatrixCsr {
    pub fn new(nrows: usize, ncols: usize, indptr: Vec<usize>, indices: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if indptr.len() != nrows + 1 || indptr[0] != 0 {
            return Err(Error::InvalidArgument("row pointer array has wrong shape".into()));
        }
        if indices.len() != data.len() || indptr[nrows] != indices.len() {
            return Err(Error::InvalidArgument("nnz inconsistent with row pointers".into()));
        }
        for i in 0..nrows {
            if indptr[i] > indptr[i + 1] {
                return Err(Error::InvalidArgument(format!("row pointers decrease at row {i}")));
            }
            let cols = &indices[indptr[i]..indptr[i + 1]];
            if cols.iter().any(|&c| c >= ncols) {
                return Err(Error::InvalidArgument(format!("column index out of range in row {i}")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("unsorted columns in row {i}")));
            }
        }
        Ok(Self { nrows, ncols, indptr, indices, data })
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(i, j, _) in &t {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside {nrows}×{ncols}")));
            }
        }
        t.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut data: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in t {
            if last == Some((i, j)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                data.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            indptr[i + 1] += indptr[i];
        }
        Self::new(nrows, ncols, indptr, indices, data)
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self { nrows: n, ncols: n, indptr: (0..=n).collect(), indices: (0..n).collect(), data: vec![1.0; n] }
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut trip = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    trip.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), &trip).expect("dense entries are in range")
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.data[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |p| vals[p])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut data = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let p = next[j];
                indices[p] = i;
                data[p] = v;
                next[j] += 1;
            }
        }
        Self { nrows: self.ncols, ncols: self.nrows, indptr, indices, data }
    }

    /// Sparse-sparse product `self · other`.
    pub fn matmul(&self, other: &SparseMatrixCsr) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: other.nrows });
        }
        let n = other.ncols;
        let mut acc = vec![0.0; n];
        let mut mark = vec![usize::MAX; n];
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::new();
        let mut data = Vec::new();
        let mut pattern: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            pattern.clear();
            let (cols, vals) = self.row(i);
            for (&k, &a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&j, &b) in ocols.iter().zip(ovals) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = 0.0;
                        pattern.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            pattern.sort_unstable();
            for &j in &pattern {
                indices.push(j);
                data.push(acc[j]);
            }
            indptr[i + 1] = indices.len();
        }
        Ok(Self { nrows: self.nrows, ncols: n, indptr, indices, data })
    }

    /// `AᵀA` as a sparse matrix.
    pub fn normal_matrix(&self) -> Self {
        self.transpose().matmul(self).expect("shapes agree")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply(v)
    }

    pub fn tr_matvec(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.apply_adjoint(w)
    }
}

impl LinearOperator for SparseMatrixCsr {
    fn as_csr(&self) -> Option<&SparseMatrixCsr> {
        Some(self)
    }

    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.ncols);
        assert_eq!(out.len(), self.nrows);
        for (i, o) in out.iter_mut().enumerate() {
            let r = self.indptr[i]..self.indptr[i + 1];
            *o = self.indices[r.clone()].iter().zip(&self.data[r]).map(|(&j, &a)| a * v[j]).sum();
        }
    }

    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        assert_eq!(w.len(), self.nrows);
        assert_eq!(out.len(), self.ncols);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &a) in cols.iter().zip(vals) {
                out[j] += a * wi;
            }
        }
    }
}

/// Five-point Laplacian on a `g × g` interior grid of the unit square with
/// homogeneous Dirichlet boundary: `A₁ ⊗ I + I ⊗ A₁` where
/// `A₁ = (g+1)²·tridiag(−1, 2, −1)`.
pub fn laplacian_2d(g: usize) -> Result<SparseMatrixCsr> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {g}")));
    }
    let h2 = ((g + 1) * (g + 1)) as f64;
    let n = g * g;
    let mut trip = Vec::with_capacity(5 * n);
    for a in 0..g {
        for i in 0..g {
            let row = a * g + i;
            trip.push((row, row, 4.0 * h2));
            if a > 0 {
                trip.push((row, row - g, -h2));
            }
            if a + 1 < g {
                trip.push((row, row + g, -h2));
            }
            if i > 0 {
                trip.push((row, row - 1, -h2));
            }
            if i + 1 < g {
                trip.push((row, row + 1, -h2));
            }
        }
    }
    SparseMatrixCsr::from_triplets(n, n, &trip)
}
