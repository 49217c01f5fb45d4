use super::LinearOperator;
use crate::dense::{axpy, DenseMatrix};
use crate::error::{Error, Result};

/// `I_m ⊗ X` acting on `vec(Y)` (column-stacked `p × m`), giving `vec(X·Y)`.
#[derive(Debug, Clone)]
pub struct KronLeft {
    x: DenseMatrix,
    m: usize,
}

impl KronLeft {
    pub fn new(x: DenseMatrix, m: usize) -> Self {
        Self { x, m }
    }

    pub fn factor(&self) -> &DenseMatrix {
        &self.x
    }
}

impl LinearOperator for KronLeft {
    fn nrows(&self) -> usize {
        self.x.nrows() * self.m
    }

    fn ncols(&self) -> usize {
        self.x.ncols() * self.m
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let (n, p) = (self.x.nrows(), self.x.ncols());
        assert_eq!(v.len(), p * self.m);
        assert_eq!(out.len(), n * self.m);
        for c in 0..self.m {
            let o = &mut out[c * n..(c + 1) * n];
            o.iter_mut().for_each(|e| *e = 0.0);
            for k in 0..p {
                axpy(v[c * p + k], self.x.col(k), o);
            }
        }
    }

    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        let (n, p) = (self.x.nrows(), self.x.ncols());
        assert_eq!(w.len(), n * self.m);
        assert_eq!(out.len(), p * self.m);
        for c in 0..self.m {
            let wc = &w[c * n..(c + 1) * n];
            for k in 0..p {
                out[c * p + k] = crate::dense::dot(self.x.col(k), wc);
            }
        }
    }
}

/// `Yᵀ ⊗ I_n` acting on `vec(X)` (column-stacked `n × p`), giving `vec(X·Y)`.
#[derive(Debug, Clone)]
pub struct KronRight {
    y: DenseMatrix,
    n: usize,
}

impl KronRight {
    pub fn new(y: DenseMatrix, n: usize) -> Self {
        Self { y, n }
    }

    pub fn factor(&self) -> &DenseMatrix {
        &self.y
    }
}

impl LinearOperator for KronRight {
    fn nrows(&self) -> usize {
        self.n * self.y.ncols()
    }

    fn ncols(&self) -> usize {
        self.n * self.y.nrows()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let (p, m, n) = (self.y.nrows(), self.y.ncols(), self.n);
        assert_eq!(v.len(), n * p);
        assert_eq!(out.len(), n * m);
        for c in 0..m {
            let o = &mut out[c * n..(c + 1) * n];
            o.iter_mut().for_each(|e| *e = 0.0);
            for k in 0..p {
                let ykc = self.y[(k, c)];
                if ykc != 0.0 {
                    axpy(ykc, &v[k * n..(k + 1) * n], o);
                }
            }
        }
    }

    fn apply_adjoint_into(&self, w: &[f64], out: &mut [f64]) {
        let (p, m, n) = (self.y.nrows(), self.y.ncols(), self.n);
        assert_eq!(w.len(), n * m);
        assert_eq!(out.len(), n * p);
        for k in 0..p {
            let o = &mut out[k * n..(k + 1) * n];
            o.iter_mut().for_each(|e| *e = 0.0);
            for c in 0..m {
                let ykc = self.y[(k, c)];
                if ykc != 0.0 {
                    axpy(ykc, &w[c * n..(c + 1) * n], o);
                }
            }
        }
    }
}

/// `vec(X·Y)` for `X: n × p` and `v = vec(Y)` with `Y: p × m`.
pub fn kron_left_apply(x: &DenseMatrix, m: usize, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != x.ncols() * m {
        return Err(Error::DimensionMismatch { expected: x.ncols() * m, got: v.len() });
    }
    KronLeft::new(x.clone(), m).apply(v)
}

/// `vec(X·Y)` for `Y: p × m` and `v = vec(X)` with `X: n × p`.
pub fn kron_right_apply(y: &DenseMatrix, n: usize, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != y.nrows() * n {
        return Err(Error::DimensionMismatch { expected: y.nrows() * n, got: v.len() });
    }
    KronRight::new(y.clone(), n).apply(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let mut k = DenseMatrix::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                for r in 0..b.nrows() {
                    for s in 0..b.ncols() {
                        k[(i * b.nrows() + r, j * b.ncols() + s)] = a[(i, j)] * b[(r, s)];
                    }
                }
            }
        }
        k
    }

    fn sample(nr: usize, nc: usize, seed: u64) -> DenseMatrix {
        let mut s = seed;
        let data = (0..nr * nc)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect();
        DenseMatrix::from_col_major(nr, nc, data).unwrap()
    }

    #[test]
    fn scalar_factor() {
        let x = DenseMatrix::from_rows(&[vec![2.0]]).unwrap();
        assert_eq!(kron_left_apply(&x, 3, &[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 4.0, 6.0]);
        assert_eq!(kron_right_apply(&x, 3, &[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn identity_factor() {
        let v = [1.0, -2.0, 3.5, 0.25, 7.0, -1.0];
        let i2 = DenseMatrix::identity(2);
        assert_eq!(kron_left_apply(&i2, 3, &v).unwrap(), v.to_vec());
        assert_eq!(kron_right_apply(&i2, 3, &v).unwrap(), v.to_vec());
    }

    #[test]
    fn matches_dense_kronecker() {
        let x = sample(4, 2, 1);
        let y = sample(2, 3, 2);
        let xy = x.matmul(&y);
        let left = kron_left_apply(&x, 3, y.as_slice()).unwrap();
        let right = kron_right_apply(&y, 4, x.as_slice()).unwrap();
        let kl = dense_kron(&DenseMatrix::identity(3), &x);
        let kr = dense_kron(&y.transpose(), &DenseMatrix::identity(4));
        let dl = kl.matvec(y.as_slice());
        let dr = kr.matvec(x.as_slice());
        for i in 0..12 {
            assert!((left[i] - xy.as_slice()[i]).abs() < 1e-14);
            assert!((right[i] - xy.as_slice()[i]).abs() < 1e-14);
            assert!((left[i] - dl[i]).abs() < 1e-14);
            assert!((right[i] - dr[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn mismatch() {
        let x = DenseMatrix::identity(2);
        assert!(kron_left_apply(&x, 3, &[1.0]).is_err());
        assert!(kron_right_apply(&x, 3, &[1.0]).is_err());
    }
}
