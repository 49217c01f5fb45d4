//! Outer subspace iteration for bounded-variable least squares.
//!
//! Starting from `r₀ = −Aᵀb`, each outer step appends the normalized KKT
//! residual `r = Aᵀ(A·x − b) − λ + μ` to the basis `V`, borders the factor of
//! `VᵀAᵀA·V`, and re-solves the projected problem
//!
//! ```text
//! minimize ½‖A·V·y − b‖²   subject to   ℓ ≤ V·y ≤ u
//! ```
//!
//! with the active-set QP solver, warm-started from the previous solution
//! padded with a zero and the previous working set. The loop stops when the
//! residual is small, when the projected Hessian stops being numerically
//! positive definite, or at the iteration limit.

mod factor;
mod history;
mod problem;
mod subspace;

pub use factor::{off_tridiagonal_ratio, CholeskyFactor, GramSchmidtFactor, ProjectedFactor};
pub use history::{ConvergenceHistory, IterationRecord, RunSummary, Termination, CSV_HEADER};
pub use problem::{shift_problem, BvlsProblem, ShiftedProblem};
pub use subspace::{combine, expand_basis, residual, scatter_multipliers, BasisConstraints};

use std::time::Instant;

use serde::Serialize;

use crate::dense::{dot, norm2, LowerTriangular};
use crate::error::{Error, Result};
use crate::operators::{IdentityPreconditioner, Ilut, LinearOperator, Preconditioner};
use crate::qpas::{qpas_solve, QpProblem, QpasOptions, QpasTermination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceMode {
    /// Stop when `‖r_k‖ ≤ tol·‖r₀‖`.
    Relative,
    /// Stop when `‖r_k‖ ≤ tol`.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Factorization {
    Cholesky,
    GramSchmidt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreconditionerKind {
    None,
    /// ILUT of `AᵀA` with the given drop tolerance. Needs an operator with
    /// an explicit sparse form.
    Ilut(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub tol_mode: ToleranceMode,
    /// Relative pivot threshold for the projected factorization.
    pub posdef_eps: f64,
    /// `None` means `3n + 10`.
    pub maxit_outer: Option<usize>,
    /// Working-set changes allowed per inner solve; `None` is unlimited.
    pub maxit_inner: Option<usize>,
    pub factorization: Factorization,
    pub recurrence: bool,
    pub preconditioner: PreconditionerKind,
    /// Start each inner solve from the previous solution and working set.
    pub warm_start: bool,
    /// Keep `y_k` and the working set of every outer iteration in the history.
    pub record_iterates: bool,
    /// Track the largest recurrence drift of the inner solves.
    pub measure_drift: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            tol_mode: ToleranceMode::Relative,
            posdef_eps: 1e-7,
            maxit_outer: None,
            maxit_inner: Some(10),
            factorization: Factorization::Cholesky,
            recurrence: false,
            preconditioner: PreconditionerKind::None,
            warm_start: true,
            record_iterates: false,
            measure_drift: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.posdef_eps > 0.0) {
            return Err(Error::InvalidArgument(format!("posdef threshold must be positive, got {}", self.posdef_eps)));
        }
        if self.maxit_inner == Some(0) {
            return Err(Error::InvalidArgument("inner iteration cap must be at least 1".into()));
        }
        if let PreconditionerKind::Ilut(tau) = self.preconditioner {
            if !(tau >= 0.0) {
                return Err(Error::InvalidArgument(format!("ILUT drop tolerance must be nonnegative, got {tau}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    /// Solution in the original (unshifted) coordinates.
    pub x: Vec<f64>,
    /// Lower-bound multipliers.
    pub lambda: Vec<f64>,
    /// Upper-bound multipliers.
    pub mu: Vec<f64>,
    /// Projected solution, `x = V·y + shift`.
    pub y: Vec<f64>,
    /// Bound rows held active: `i < n` lower, `n + i` upper.
    pub working_set: Vec<usize>,
    /// Columns of `V`.
    pub basis: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
    /// Factor of `VᵀAᵀA·V` (`Bᵀ` for the Gram-Schmidt variant).
    pub factor: LowerTriangular,
    /// `U` of `A·V = U·B` (Gram-Schmidt variant only).
    pub orthonormal_image: Option<Vec<Vec<f64>>>,
    pub history: ConvergenceHistory,
    pub termination: Termination,
    /// `‖r₀‖`, the reference for relative tolerances.
    pub initial_resnorm: f64,
    /// Largest recurrence drift over all inner solves (when measured).
    pub max_drift: f64,
    pub inner_exits: InnerExitStats,
}

/// How the inner solves of one run ended.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct InnerExitStats {
    pub solves: usize,
    /// Solves that stopped on the working-set change cap.
    pub capped: usize,
    /// Largest relative search-direction size at any exit (zero up to roundoff).
    pub max_exit_step: f64,
    /// Largest constraint violation at any exit.
    pub max_exit_infeasibility: f64,
}

impl InnerExitStats {
    fn record(&mut self, r: &crate::qpas::QpasResult) {
        self.solves += 1;
        if r.terminated_by == QpasTermination::IterationCap {
            self.capped += 1;
        }
        self.max_exit_step = self.max_exit_step.max(r.exit_step);
        self.max_exit_infeasibility = self.max_exit_infeasibility.max(r.exit_infeasibility);
    }
}

/// Decision after an outer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    Stop(Termination),
}

/// Both stopping rules at once: a small residual or a failed factor update
/// ends the iteration, as does the outer iteration limit.
pub fn check_stop(resnorm: f64, threshold: f64, factor_ok: bool, outer_iter: usize, maxit: usize) -> StopDecision {
    if resnorm <= threshold {
        StopDecision::Stop(Termination::ResidualTol)
    } else if !factor_ok {
        StopDecision::Stop(Termination::PosdefLost)
    } else if outer_iter >= maxit {
        StopDecision::Stop(Termination::Maxit)
    } else {
        StopDecision::Continue
    }
}

/// Solves with the factorization and preconditioner chosen in `cfg`.
pub fn solve<A: LinearOperator>(problem: &BvlsProblem<A>, cfg: &SolverConfig) -> Result<SolveOutput> {
    match cfg.preconditioner {
        PreconditionerKind::None => {
            solve_with_preconditioner(problem, cfg, &IdentityPreconditioner { n: problem.ncols() })
        }
        PreconditionerKind::Ilut(tau) => {
            let s = problem
                .a
                .as_csr()
                .ok_or_else(|| Error::InvalidArgument("ILUT preconditioning needs an explicit sparse matrix".into()))?;
            let m = Ilut::factor(&s.normal_matrix(), tau)?;
            solve_with_preconditioner(problem, cfg, &m)
        }
    }
}

/// Cholesky variant regardless of `cfg.factorization`.
pub fn solve_cholesky<A: LinearOperator>(problem: &BvlsProblem<A>, cfg: &SolverConfig) -> Result<SolveOutput> {
    solve(problem, &SolverConfig { factorization: Factorization::Cholesky, ..*cfg })
}

/// Modified Gram-Schmidt variant regardless of `cfg.factorization`.
pub fn solve_gram_schmidt<A: LinearOperator>(problem: &BvlsProblem<A>, cfg: &SolverConfig) -> Result<SolveOutput> {
    solve(problem, &SolverConfig { factorization: Factorization::GramSchmidt, ..*cfg })
}

/// Solves with an explicit preconditioner; `cfg.preconditioner` is ignored.
pub fn solve_with_preconditioner<A: LinearOperator, P: Preconditioner + ?Sized>(
    problem: &BvlsProblem<A>,
    cfg: &SolverConfig,
    precond: &P,
) -> Result<SolveOutput> {
    cfg.validate()?;
    if precond.order() != problem.ncols() {
        return Err(Error::DimensionMismatch { expected: problem.ncols(), got: precond.order() });
    }
    match cfg.factorization {
        Factorization::Cholesky => {
            let (out, _) = outer_loop(problem, cfg, precond, CholeskyFactor::new(cfg.posdef_eps))?;
            Ok(out)
        }
        Factorization::GramSchmidt => {
            let (mut out, f) = outer_loop(problem, cfg, precond, GramSchmidtFactor::new(cfg.posdef_eps))?;
            out.orthonormal_image = Some(f.into_parts().0);
            Ok(out)
        }
    }
}

fn outer_loop<A, P, F>(
    problem: &BvlsProblem<A>,
    cfg: &SolverConfig,
    precond: &P,
    mut factor: F,
) -> Result<(SolveOutput, F)>
where
    A: LinearOperator,
    P: Preconditioner + ?Sized,
    F: ProjectedFactor,
{
    let start = Instant::now();
    let a = &problem.a;
    let n = problem.ncols();
    let shifted = shift_problem(problem)?;
    let b = &shifted.b;
    let atb = a.apply_adjoint(b)?;
    let maxit = cfg.maxit_outer.unwrap_or(3 * n + 10);
    let qp_opts = |cap: Option<usize>| QpasOptions {
        max_iter: cap,
        recurrence: cfg.recurrence,
        measure_drift: cfg.measure_drift,
        ..QpasOptions::default()
    };

    let zeros = vec![0.0; n];
    let (mut r, mut ax) = residual(a, b, &[], &[], &zeros, &zeros, precond)?;
    let r0 = norm2(&r);
    let threshold = match cfg.tol_mode {
        ToleranceMode::Relative => cfg.tol * r0,
        ToleranceMode::Absolute => cfg.tol,
    };
    let mut history = ConvergenceHistory::default();
    let elapsed = |start: &Instant| start.elapsed().as_secs_f64() * 1e3;
    history.records.push(IterationRecord {
        k: 0,
        resnorm: r0,
        objective: 0.5 * dot(&ax, &ax),
        inner_iters: 0,
        ws_size: 0,
        ms: elapsed(&start),
    });

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut y: Vec<f64> = Vec::new();
    let mut f: Vec<f64> = Vec::new();
    let mut working: Vec<usize> = Vec::new();
    let mut lambda = zeros.clone();
    let mut mu = zeros;
    let mut max_drift = 0.0f64;
    let mut exits = InnerExitStats::default();
    let mut resnorm = r0;
    let mut k = 0usize;

    let termination = loop {
        if let StopDecision::Stop(t) = check_stop(resnorm, threshold, true, k, maxit) {
            break t;
        }
        let mut v = r.clone();
        v.iter_mut().for_each(|e| *e /= resnorm);
        if let StopDecision::Stop(t) = check_stop(resnorm, threshold, factor.extend(a, &basis, &v)?, k, maxit) {
            break t;
        }
        f.push(-dot(&v, &atb));
        basis.push(v);
        k += 1;

        let cons = BasisConstraints::new(&basis, &shifted.lower, &shifted.upper)?;
        let qp = QpProblem::new(factor.lower(), &f, &cons)?;
        let (y0, w0) = if cfg.warm_start {
            y.push(0.0);
            (std::mem::take(&mut y), std::mem::take(&mut working))
        } else {
            (vec![0.0; k], Vec::new())
        };
        let mut res = match qpas_solve(&qp, y0.clone(), &w0, &qp_opts(cfg.maxit_inner)) {
            // Under the new factor the carried-over working set can be
            // numerically dependent. The point itself is still feasible, since
            // the new coordinate is zero, so only the working set is dropped.
            // If roundoff has also left the point slightly infeasible, y = 0
            // always works.
            Err(Error::InfeasibleStart { .. } | Error::DegenerateColumn) if cfg.warm_start => {
                match qpas_solve(&qp, y0, &[], &qp_opts(cfg.maxit_inner)) {
                    Err(Error::InfeasibleStart { .. }) => {
                        qpas_solve(&qp, vec![0.0; k], &[], &qp_opts(cfg.maxit_inner))?
                    }
                    other => other?,
                }
            }
            other => other?,
        };
        let mut inner = res.inner_iterations;
        max_drift = max_drift.max(res.max_drift);
        exits.record(&res);
        (lambda, mu) = scatter_multipliers(&res.working_set, &res.multipliers, n)?;
        (r, ax) = residual(a, b, &basis, &res.x, &lambda, &mu, precond)?;
        resnorm = norm2(&r);

        // A capped inner solve is only a stationary point on its working set;
        // finish it before accepting convergence.
        if resnorm <= threshold && res.terminated_by == QpasTermination::IterationCap {
            res = qpas_solve(&qp, res.x, &res.working_set, &qp_opts(None))?;
            inner += res.inner_iterations;
            max_drift = max_drift.max(res.max_drift);
            exits.record(&res);
            (lambda, mu) = scatter_multipliers(&res.working_set, &res.multipliers, n)?;
            (r, ax) = residual(a, b, &basis, &res.x, &lambda, &mu, precond)?;
            resnorm = norm2(&r);
        }

        y = res.x;
        working = res.working_set;
        history.records.push(IterationRecord {
            k,
            resnorm,
            objective: 0.5 * dot(&ax, &ax),
            inner_iters: inner,
            ws_size: working.len(),
            ms: elapsed(&start),
        });
        if cfg.record_iterates {
            history.iterates.push(y.clone());
            history.working_sets.push(working.clone());
        }
    };
    history.termination = Some(termination);

    let x = shifted.unshift(&combine(&basis, &y, n));
    let out = SolveOutput {
        x,
        lambda,
        mu,
        y,
        working_set: working,
        basis,
        shift: shifted.shift,
        factor: factor.lower().clone(),
        orthonormal_image: None,
        history,
        termination,
        initial_resnorm: r0,
        max_drift,
        inner_exits: exits,
    };
    Ok((out, factor))
}
