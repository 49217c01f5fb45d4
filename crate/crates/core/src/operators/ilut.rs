use std::collections::BTreeSet;

use super::{Preconditioner, SparseMatrixCsr};
use crate::dense::norm2;
use crate::error::{Error, Result};

/// Threshold incomplete LU factorization `S ≈ L·U`, without pivoting.
///
/// Rows are eliminated in order. While processing row `i`, fill entries
/// (positions outside the pattern of `S`) smaller than `tau·‖S(i,:)‖₂` are
/// dropped; entries of the original pattern and the diagonal are always kept.
/// `L` has an implicit unit diagonal and is stored strictly lower.
#[derive(Debug, Clone)]
pub struct Ilut {
    lower: SparseMatrixCsr,
    upper: SparseMatrixCsr,
    tau: f64,
}

impl Ilut {
    pub fn factor(s: &SparseMatrixCsr, tau: f64) -> Result<Self> {
        let (n, nc) = s.shape();
        if n != nc {
            return Err(Error::DimensionMismatch { expected: n, got: nc });
        }
        if !(tau >= 0.0) {
            return Err(Error::InvalidArgument(format!("drop tolerance must be nonnegative, got {tau}")));
        }
        let mut l_rows: Vec<(Vec<usize>, Vec<f64>)> = Vec::with_capacity(n);
        let mut u_rows: Vec<(Vec<usize>, Vec<f64>)> = Vec::with_capacity(n);
        let mut w = vec![0.0; n];
        let mut in_row = vec![false; n];
        let mut original = vec![false; n];
        let mut upper_pattern: Vec<usize> = Vec::new();
        let mut lower_pattern: BTreeSet<usize> = BTreeSet::new();
        let mut touched: Vec<usize> = Vec::new();

        for i in 0..n {
            let (cols, vals) = s.row(i);
            let thr = tau * norm2(vals);
            upper_pattern.clear();
            lower_pattern.clear();
            for (&j, &v) in cols.iter().zip(vals) {
                w[j] = v;
                in_row[j] = true;
                original[j] = true;
                touched.push(j);
                if j < i {
                    lower_pattern.insert(j);
                } else {
                    upper_pattern.push(j);
                }
            }
            if !in_row[i] {
                in_row[i] = true;
                touched.push(i);
                w[i] = 0.0;
                upper_pattern.push(i);
            }

            let mut l_cols = Vec::new();
            let mut l_vals = Vec::new();
            while let Some(k) = lower_pattern.pop_first() {
                let (ucols, uvals) = &u_rows[k];
                // the test is on the unscaled entry so it does not depend on the pivot size
                if w[k].abs() < thr && !original[k] {
                    continue;
                }
                let mult = w[k] / uvals[0];
                if mult == 0.0 {
                    continue;
                }
                l_cols.push(k);
                l_vals.push(mult);
                for (&j, &u) in ucols.iter().zip(uvals).skip(1) {
                    if !in_row[j] {
                        in_row[j] = true;
                        touched.push(j);
                        w[j] = 0.0;
                        if j < i {
                            lower_pattern.insert(j);
                        } else {
                            upper_pattern.push(j);
                        }
                    }
                    w[j] -= mult * u;
                }
            }

            upper_pattern.sort_unstable();
            let mut u_cols = Vec::with_capacity(upper_pattern.len());
            let mut u_vals = Vec::with_capacity(upper_pattern.len());
            for &j in &upper_pattern {
                if j == i || original[j] || w[j].abs() >= thr {
                    u_cols.push(j);
                    u_vals.push(w[j]);
                }
            }
            if w[i] == 0.0 || !w[i].is_finite() {
                return Err(Error::ZeroPivot(i));
            }

            for &j in &touched {
                in_row[j] = false;
                original[j] = false;
                w[j] = 0.0;
            }
            touched.clear();

            l_rows.push((l_cols, l_vals));
            u_rows.push((u_cols, u_vals));
        }

        Ok(Self { lower: assemble(n, &l_rows)?, upper: assemble(n, &u_rows)?, tau })
    }

    /// Strictly lower part of `L` (unit diagonal implied).
    pub fn lower(&self) -> &SparseMatrixCsr {
        &self.lower
    }

    pub fn upper(&self) -> &SparseMatrixCsr {
        &self.upper
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `M⁻¹·r` with `M = L·U`.
    pub fn apply_inverse(&self, r: &[f64]) -> Vec<f64> {
        let n = self.upper.shape().0;
        assert_eq!(r.len(), n);
        let mut x = r.to_vec();
        for i in 0..n {
            let (cols, vals) = self.lower.row(i);
            let s: f64 = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let (cols, vals) = self.upper.row(i);
            let s: f64 = cols.iter().zip(vals).skip(1).map(|(&j, &v)| v * x[j]).sum();
            x[i] = (x[i] - s) / vals[0];
        }
        x
    }
}

fn assemble(n: usize, rows: &[(Vec<usize>, Vec<f64>)]) -> Result<SparseMatrixCsr> {
    let mut indptr = Vec::with_capacity(n + 1);
    indptr.push(0);
    let mut indices = Vec::new();
    let mut data = Vec::new();
    for (c, v) in rows {
        indices.extend_from_slice(c);
        data.extend_from_slice(v);
        indptr.push(indices.len());
    }
    SparseMatrixCsr::new(n, n, indptr, indices, data)
}

impl Preconditioner for Ilut {
    fn order(&self) -> usize {
        self.upper.shape().0
    }

    fn solve(&self, r: &[f64]) -> Vec<f64> {
        self.apply_inverse(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    fn lu_product(f: &Ilut) -> DenseMatrix {
        let n = f.order();
        let mut l = f.lower().to_dense();
        for i in 0..n {
            l[(i, i)] = 1.0;
        }
        l.matmul(&f.upper().to_dense())
    }

    fn spd5() -> SparseMatrixCsr {
        let rows = vec![
            vec![4.0, 1.0, 0.5, 0.0, 0.2],
            vec![1.0, 5.0, 1.0, 0.3, 0.0],
            vec![0.5, 1.0, 6.0, 1.0, 0.4],
            vec![0.0, 0.3, 1.0, 5.0, 1.0],
            vec![0.2, 0.0, 0.4, 1.0, 4.0],
        ];
        SparseMatrixCsr::from_dense(&DenseMatrix::from_rows(&rows).unwrap())
    }

    #[test]
    fn zero_tau_is_complete_lu() {
        let s = spd5();
        let f = Ilut::factor(&s, 0.0).unwrap();
        let lu = lu_product(&f);
        let d = s.to_dense();
        for i in 0..5 {
            for j in 0..5 {
                assert!((lu[(i, j)] - d[(i, j)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_matrix() {
        let s = SparseMatrixCsr::from_triplets(3, 3, &[(0, 0, 2.0), (1, 1, -3.0), (2, 2, 0.5)]).unwrap();
        for tau in [0.0, 0.1, 10.0] {
            let f = Ilut::factor(&s, tau).unwrap();
            assert_eq!(f.lower().nnz(), 0);
            assert_eq!(f.upper(), &s);
        }
    }

    #[test]
    fn zero_pivot_detected() {
        let s = SparseMatrixCsr::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(Ilut::factor(&s, 0.0), Err(Error::ZeroPivot(0))));
    }

    #[test]
    fn large_tau_keeps_original_pattern() {
        let s = spd5();
        let f = Ilut::factor(&s, 1e3).unwrap();
        for i in 0..5 {
            let (lc, _) = f.lower().row(i);
            let (uc, _) = f.upper().row(i);
            for &j in lc.iter().chain(uc) {
                assert!(s.get(i, j) != 0.0, "fill at ({i},{j}) survived");
            }
        }
    }

    #[test]
    fn dropping_is_scale_invariant() {
        let s = crate::operators::laplacian_2d(6).unwrap().normal_matrix();
        let scaled = SparseMatrixCsr::from_dense(&{
            let mut d = s.to_dense();
            d.as_mut_slice().iter_mut().for_each(|v| *v *= 1e-6);
            d
        });
        let (a, b) = (Ilut::factor(&s, 0.05).unwrap(), Ilut::factor(&scaled, 0.05).unwrap());
        assert_eq!(a.lower().nnz(), b.lower().nnz());
        assert_eq!(a.upper().nnz(), b.upper().nnz());
        assert!(a.lower().nnz() < Ilut::factor(&s, 0.0).unwrap().lower().nnz());
    }
}
