use crate::error::{Error, Result};
use crate::operators::LinearOperator;

/// `minimize ½‖A·x − b‖²  subject to  lower ≤ x ≤ upper`.
///
/// Bounds may be infinite.
#[derive(Debug, Clone)]
pub struct BvlsProblem<A> {
    pub a: A,
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl<A: LinearOperator> BvlsProblem<A> {
    pub fn new(a: A, b: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("operator must be nonempty, got {m}×{n}")));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: b.len() });
        }
        for v in [&lower, &upper] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if !(l <= u) || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::InvalidBounds { index: i, lower: l, upper: u });
            }
        }
        Ok(Self { a, b, lower, upper })
    }

    /// No bounds at all.
    pub fn unconstrained(a: A, b: Vec<f64>) -> Result<Self> {
        let n = a.ncols();
        Self::new(a, b, vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n])
    }

    /// `x ≥ 0`.
    pub fn nonnegative(a: A, b: Vec<f64>) -> Result<Self> {
        let n = a.ncols();
        Self::new(a, b, vec![0.0; n], vec![f64::INFINITY; n])
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let ax = self.a.apply(x)?;
        Ok(0.5 * ax.iter().zip(&self.b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>())
    }
}

/// The problem moved so that the bounds bracket zero: `x = x̃ + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedProblem {
    pub shift: Vec<f64>,
    /// `b − A·shift`.
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ShiftedProblem {
    pub fn unshift(&self, x_shifted: &[f64]) -> Vec<f64> {
        x_shifted.iter().zip(&self.shift).map(|(x, s)| x + s).collect()
    }
}

/// Shifts by `sᵢ = median(ℓᵢ, 0, uᵢ)`, so `0` is feasible for the shifted
/// bounds. Infinite bounds stay infinite.
pub fn shift_problem<A: LinearOperator>(p: &BvlsProblem<A>) -> Result<ShiftedProblem> {
    for (i, (&l, &u)) in p.lower.iter().zip(&p.upper).enumerate() {
        if !(l <= u) {
            return Err(Error::InvalidBounds { index: i, lower: l, upper: u });
        }
    }
    let shift: Vec<f64> = p.lower.iter().zip(&p.upper).map(|(&l, &u)| 0.0f64.max(l).min(u)).collect();
    let b = if shift.iter().all(|&s| s == 0.0) {
        p.b.clone()
    } else {
        let a_s = p.a.apply(&shift)?;
        p.b.iter().zip(&a_s).map(|(b, a)| b - a).collect()
    };
    let lower = p.lower.iter().zip(&shift).map(|(l, s)| l - s).collect();
    let upper = p.upper.iter().zip(&shift).map(|(u, s)| u - s).collect();
    Ok(ShiftedProblem { shift, b, lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    #[test]
    fn bracketing_bounds_unchanged() {
        let p = BvlsProblem::new(DenseMatrix::identity(1), vec![3.0], vec![-1.0], vec![1.0]).unwrap();
        let s = shift_problem(&p).unwrap();
        assert_eq!(s.shift, vec![0.0]);
        assert_eq!(s.b, vec![3.0]);
        assert_eq!((s.lower[0], s.upper[0]), (-1.0, 1.0));
    }

    #[test]
    fn positive_interval_shifts_to_lower() {
        let a = DenseMatrix::from_rows(&[vec![2.0], vec![-1.0]]).unwrap();
        let p = BvlsProblem::new(a, vec![1.0, 1.0], vec![2.0], vec![5.0]).unwrap();
        let s = shift_problem(&p).unwrap();
        assert_eq!(s.shift, vec![2.0]);
        assert_eq!((s.lower[0], s.upper[0]), (0.0, 3.0));
        assert_eq!(s.b, vec![1.0 - 4.0, 1.0 + 2.0]);
        assert_eq!(s.unshift(&[0.5]), vec![2.5]);
    }

    #[test]
    fn infinite_bounds() {
        let p = BvlsProblem::new(
            DenseMatrix::identity(3),
            vec![0.0; 3],
            vec![f64::NEG_INFINITY, 1.0, f64::NEG_INFINITY],
            vec![f64::INFINITY, f64::INFINITY, -2.0],
        )
        .unwrap();
        let s = shift_problem(&p).unwrap();
        assert_eq!(s.shift, vec![0.0, 1.0, -2.0]);
        assert_eq!(s.lower[0], f64::NEG_INFINITY);
        assert_eq!(s.upper[1], f64::INFINITY);
        for (l, u) in s.lower.iter().zip(&s.upper) {
            assert!(*l <= 0.0 && 0.0 <= *u);
        }
    }

    #[test]
    fn rejects_crossed_bounds() {
        let r = BvlsProblem::new(DenseMatrix::identity(1), vec![0.0], vec![1.0], vec![0.0]);
        assert!(matches!(r, Err(Error::InvalidBounds { index: 0, .. })));
        let r = BvlsProblem::new(DenseMatrix::identity(1), vec![0.0], vec![f64::NAN], vec![0.0]);
        assert!(r.is_err());
    }
}
