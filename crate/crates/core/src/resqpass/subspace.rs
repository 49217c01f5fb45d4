use crate::dense::{axpy, norm2, scale};
use crate::error::{Error, Result};
use crate::operators::{LinearOperator, Preconditioner};
use crate::qpas::ConstraintSet;

/// Bound constraints `ℓ ≤ V·y ≤ u` seen from the projected variable `y`.
///
/// Row `i < n` is `−V(i,:)·y ≤ −ℓᵢ`, row `n + i` is `V(i,:)·y ≤ uᵢ`. Rows are
/// generated from the basis on request.
pub struct BasisConstraints<'a> {
    basis: &'a [Vec<f64>],
    lower: &'a [f64],
    upper: &'a [f64],
}

impl<'a> BasisConstraints<'a> {
    pub fn new(basis: &'a [Vec<f64>], lower: &'a [f64], upper: &'a [f64]) -> Result<Self> {
        let n = lower.len();
        if upper.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: upper.len() });
        }
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        Ok(Self { basis, lower, upper })
    }

    fn n(&self) -> usize {
        self.lower.len()
    }
}

impl ConstraintSet for BasisConstraints<'_> {
    fn len(&self) -> usize {
        2 * self.n()
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn row_into(&self, i: usize, out: &mut [f64]) {
        let n = self.n();
        let (idx, sign) = if i < n { (i, -1.0) } else { (i - n, 1.0) };
        for (o, v) in out.iter_mut().zip(self.basis) {
            *o = sign * v[idx];
        }
    }

    fn rhs(&self, i: usize) -> f64 {
        let n = self.n();
        if i < n {
            -self.lower[i]
        } else {
            self.upper[i - n]
        }
    }

    fn apply_into(&self, y: &[f64], out: &mut [f64]) {
        let n = self.n();
        let x = combine(self.basis, y, n);
        for i in 0..n {
            out[i] = -x[i];
            out[n + i] = x[i];
        }
    }

    fn max_row_norm(&self) -> f64 {
        let mut sq = vec![0.0; self.n()];
        for v in self.basis {
            for (s, e) in sq.iter_mut().zip(v) {
                *s += e * e;
            }
        }
        sq.into_iter().fold(0.0, f64::max).sqrt()
    }
}

/// `V·y`.
pub fn combine(basis: &[Vec<f64>], y: &[f64], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (v, &c) in basis.iter().zip(y) {
        if c != 0.0 {
            axpy(c, v, &mut x);
        }
    }
    x
}

/// `M⁻¹·(Aᵀ(A·V·y − b) − λ + μ)`; also returns `A·V·y − b` for the objective.
pub fn residual<A: LinearOperator + ?Sized, P: Preconditioner + ?Sized>(
    a: &A,
    b: &[f64],
    basis: &[Vec<f64>],
    y: &[f64],
    lambda: &[f64],
    mu: &[f64],
    precond: &P,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.ncols();
    if y.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: y.len() });
    }
    for v in [lambda, mu] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let x = combine(basis, y, n);
    let mut ax = a.apply(&x)?;
    if b.len() != ax.len() {
        return Err(Error::DimensionMismatch { expected: ax.len(), got: b.len() });
    }
    axpy(-1.0, b, &mut ax);
    let mut raw = a.apply_adjoint(&ax)?;
    for i in 0..n {
        raw[i] += mu[i] - lambda[i];
    }
    Ok((precond.solve(&raw), ax))
}

/// Appends `r/‖r‖` to the basis and a zero coordinate to the warm-start `y`.
pub fn expand_basis(basis: &mut Vec<Vec<f64>>, y: &mut Vec<f64>, r: &[f64]) -> Result<()> {
    let nr = norm2(r);
    if nr == 0.0 || !nr.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot normalize residual of norm {nr}")));
    }
    let mut v = r.to_vec();
    scale(1.0 / nr, &mut v);
    basis.push(v);
    y.push(0.0);
    Ok(())
}

/// Maps working-set multipliers to full-length `λ` (lower bounds) and `μ`
/// (upper bounds).
pub fn scatter_multipliers(working: &[usize], mult: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if working.len() != mult.len() {
        return Err(Error::DimensionMismatch { expected: working.len(), got: mult.len() });
    }
    let mut lambda = vec![0.0; n];
    let mut mu = vec![0.0; n];
    for (&j, &m) in working.iter().zip(mult) {
        if j < n {
            lambda[j] = m;
        } else if j < 2 * n {
            mu[j - n] = m;
        } else {
            return Err(Error::IndexOutOfRange { index: j, len: 2 * n });
        }
    }
    Ok((lambda, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;
    use crate::operators::IdentityPreconditioner;

    #[test]
    fn scatter_cases() {
        let (l, m) = scatter_multipliers(&[], &[], 4).unwrap();
        assert_eq!((l, m), (vec![0.0; 4], vec![0.0; 4]));
        let (l, m) = scatter_multipliers(&[4 + 3], &[2.0], 4).unwrap();
        assert_eq!(l, vec![0.0; 4]);
        assert_eq!(m, vec![0.0, 0.0, 0.0, 2.0]);
        assert!(scatter_multipliers(&[8], &[1.0], 4).is_err());
    }

    #[test]
    fn residual_at_origin_is_minus_atb() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![0.0, 1.0]]).unwrap();
        let b = [1.0, -1.0, 2.0];
        let id = IdentityPreconditioner { n: 2 };
        let (r, _) = residual(&a, &b, &[], &[], &[0.0; 2], &[0.0; 2], &id).unwrap();
        let atb = a.tr_matvec(&b);
        assert_eq!(r, vec![-atb[0], -atb[1]]);
    }

    #[test]
    fn constraint_rows_follow_basis() {
        let basis = vec![vec![1.0, 0.0, 2.0], vec![0.0, 3.0, -1.0]];
        let lo = [-1.0, f64::NEG_INFINITY, 0.0];
        let hi = [1.0, 2.0, f64::INFINITY];
        let c = BasisConstraints::new(&basis, &lo, &hi).unwrap();
        assert_eq!((c.len(), c.dim()), (6, 2));
        assert_eq!(c.row(2), vec![-2.0, 1.0]);
        assert_eq!(c.row(5), vec![2.0, -1.0]);
        assert_eq!(c.rhs(0), 1.0);
        assert_eq!(c.rhs(1), f64::INFINITY);
        assert_eq!(c.rhs(4), 2.0);
        let y = [0.5, -1.0];
        let cy = c.apply(&y);
        for i in 0..6 {
            let r = c.row(i);
            assert!((cy[i] - (r[0] * y[0] + r[1] * y[1])).abs() < 1e-15);
        }
        assert_eq!(c.max_row_norm(), 3.0);
    }

    #[test]
    fn expand_normalizes() {
        let mut basis = Vec::new();
        let mut y = Vec::new();
        expand_basis(&mut basis, &mut y, &[3.0, 4.0]).unwrap();
        assert!((basis[0][0] - 0.6).abs() < 1e-15 && (basis[0][1] - 0.8).abs() < 1e-15);
        assert_eq!(y, vec![0.0]);
        assert!(expand_basis(&mut basis, &mut y, &[0.0, 0.0]).is_err());
    }
}
