use super::RngStream;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operators::{KronLeft, KronRight};
use crate::reference::projected_gradient_nnls;
use crate::resqpass::{solve, BvlsProblem, SolverConfig};

#[derive(Debug, Clone)]
pub struct NmfInstance {
    /// `max(X·Y + noise, 0)`, `n × m`.
    pub a: DenseMatrix,
    pub x_true: DenseMatrix,
    pub y_true: DenseMatrix,
    /// Random `n × p` starting factor for ALS.
    pub x_init: DenseMatrix,
}

/// Factors with uniform `(0, 1)` entries, Gaussian noise of standard
/// deviation `noise` on the product, negatives clipped to zero.
pub fn gen_nmf(n: usize, m: usize, p: usize, noise: f64, seed: u64) -> Result<NmfInstance> {
    if p == 0 || p > n.min(m) {
        return Err(Error::InvalidArgument(format!("rank {p} must lie in 1..={}", n.min(m))));
    }
    let mut rng = RngStream::new(seed);
    let mut uniform = |r: usize, c: usize| {
        let data = (0..r * c).map(|_| rng.uniform()).collect();
        DenseMatrix::from_col_major(r, c, data)
    };
    let x_true = uniform(n, p)?;
    let y_true = uniform(p, m)?;
    let x_init = uniform(n, p)?;
    let mut a = x_true.matmul(&y_true);
    for v in a.as_mut_slice() {
        *v = (*v + noise * rng.normal()).max(0.0);
    }
    Ok(NmfInstance { a, x_true, y_true, x_init })
}

/// Solver used for the nonnegative least-squares half-steps.
#[derive(Debug, Clone, Copy)]
pub enum NnlsBackend {
    ResQpass(SolverConfig),
    /// Projected gradient warm-started from the current factor.
    ProjectedGradient {
        tol: f64,
        maxit: usize,
    },
}

#[derive(Debug, Clone)]
pub struct HalfStep {
    /// `‖A − X·Y‖_F` after the half-step.
    pub frobenius: f64,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub ws_size: usize,
    pub ms: f64,
}

#[derive(Debug, Clone)]
pub struct AlsResult {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    /// Two entries per ALS iteration: after the `Y` update, after the `X` update.
    pub steps: Vec<HalfStep>,
}

impl AlsResult {
    pub fn final_objective(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.frobenius)
    }
}

fn frobenius_gap(a: &DenseMatrix, x: &DenseMatrix, y: &DenseMatrix) -> f64 {
    let xy = x.matmul(y);
    a.as_slice().iter().zip(xy.as_slice()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Alternating nonnegative least squares: `iters` rounds of
/// `Y ← argmin_{Y≥0} ‖A − X·Y‖`, then `X ← argmin_{X≥0} ‖A − X·Y‖`, each as one
/// vectorized NNLS problem through the Kronecker operators.
pub fn als(a: &DenseMatrix, x0: &DenseMatrix, iters: usize, backend: &NnlsBackend) -> Result<AlsResult> {
    let (n, m) = (a.nrows(), a.ncols());
    let p = x0.ncols();
    if x0.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.nrows() });
    }
    let rhs = a.as_slice().to_vec();
    let mut x = x0.clone();
    let mut y = DenseMatrix::zeros(p, m);
    let mut steps = Vec::with_capacity(2 * iters);

    for _ in 0..iters {
        for update_y in [true, false] {
            let start = std::time::Instant::now();
            let (sol, outer, inner, ws) = if update_y {
                nnls(KronLeft::new(x.clone(), m), &rhs, y.as_slice(), backend)?
            } else {
                nnls(KronRight::new(y.clone(), n), &rhs, x.as_slice(), backend)?
            };
            if update_y {
                y = DenseMatrix::from_col_major(p, m, sol)?;
            } else {
                x = DenseMatrix::from_col_major(n, p, sol)?;
            }
            steps.push(HalfStep {
                frobenius: frobenius_gap(a, &x, &y),
                outer_iters: outer,
                inner_iters: inner,
                ws_size: ws,
                ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(AlsResult { x, y, steps })
}

fn nnls<A: crate::operators::LinearOperator>(
    op: A,
    rhs: &[f64],
    current: &[f64],
    backend: &NnlsBackend,
) -> Result<(Vec<f64>, usize, usize, usize)> {
    match backend {
        NnlsBackend::ResQpass(cfg) => {
            let problem = BvlsProblem::nonnegative(op, rhs.to_vec())?;
            let out = solve(&problem, cfg)?;
            let (outer, inner) = (out.history.outer_iterations(), out.history.total_inner_iterations());
            Ok((out.x, outer, inner, out.working_set.len()))
        }
        NnlsBackend::ProjectedGradient { tol, maxit } => {
            Ok((projected_gradient_nnls(&op, rhs, current, *tol, *maxit)?, 0, 0, 0))
        }
    }
}
