//! Primal active-set solver for small dense convex QPs
//!
//! ```text
//! minimize ½·xᵀGx + fᵀx   subject to   C·x ≤ d
//! ```
//!
//! with `G = L·Lᵀ` supplied through its Cholesky factor. In the variables
//! `w = Lᵀx` the objective is `½‖w + L⁻¹f‖²` and the working-set rows are
//! `X = L⁻¹C_Wᵀ = Q·R`. With `g = Lᵀx + L⁻¹f` the multipliers are
//! `λ = −R⁻¹Qᵀg` and the step is `p = −L⁻ᵀ(g − QQᵀg)`. This equals the
//! Schur-complement form `(C_W G⁻¹ C_Wᵀ)·λ = −C_W(x + G⁻¹f)` but never squares
//! the conditioning of `R` or cancels large terms of `G⁻¹`. `Q`, `R`, `X` and
//! `Y = G⁻¹C_Wᵀ` are updated column by column as constraints enter and leave
//! the working set.
//!
//! Constraint rows are produced on demand through [`ConstraintSet`], so the
//! caller never has to materialize `C`.

use crate::dense::{axpy, dot, norm2, norm_inf, LowerTriangular, QRFactors};
use crate::error::{Error, Result};

/// Row access to the constraint matrix `C` (`t × k`) and bound vector `d`.
///
/// Rows whose bound is `+∞` never block a step and never enter the working set.
pub trait ConstraintSet {
    /// Number of rows `t`.
    fn len(&self) -> usize;

    /// Number of columns `k`.
    fn dim(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn row_into(&self, i: usize, out: &mut [f64]);

    fn rhs(&self, i: usize) -> f64;

    /// `out[i] ← C_i·x` for every row.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    /// Upper bound on `‖C_i‖₂` over all rows; scales the "does this row
    /// move" test in the ratio test.
    fn max_row_norm(&self) -> f64 {
        let mut buf = vec![0.0; self.dim()];
        (0..self.len()).fold(0.0, |m, i| {
            self.row_into(i, &mut buf);
            m.max(norm2(&buf))
        })
    }

    fn row(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.row_into(i, &mut out);
        out
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.apply_into(x, &mut out);
        out
    }
}

/// Explicitly stored constraint rows.
#[derive(Debug, Clone)]
pub struct DenseConstraints {
    dim: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl DenseConstraints {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), got: rhs.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
        }
        Ok(Self { dim, rows, rhs })
    }

    /// `lower ≤ x ≤ upper` as `−x ≤ −lower` (rows `0..k`) and `x ≤ upper`
    /// (rows `k..2k`).
    pub fn boxed(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let k = lower.len();
        if upper.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: upper.len() });
        }
        let mut rows = Vec::with_capacity(2 * k);
        let mut rhs = Vec::with_capacity(2 * k);
        for (i, &l) in lower.iter().enumerate() {
            let mut r = vec![0.0; k];
            r[i] = -1.0;
            rows.push(r);
            rhs.push(-l);
        }
        for (i, &u) in upper.iter().enumerate() {
            let mut r = vec![0.0; k];
            r[i] = 1.0;
            rows.push(r);
            rhs.push(u);
        }
        Self::new(k, rows, rhs)
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), rhs: Vec::new() }
    }
}

impl ConstraintSet for DenseConstraints {
    fn len(&self) -> usize {
        self.rows.len()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn row_into(&self, i: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.rows[i]);
    }
    fn rhs(&self, i: usize) -> f64 {
        self.rhs[i]
    }
    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, r) in out.iter_mut().zip(&self.rows) {
            *o = dot(r, x);
        }
    }
}

/// `minimize ½yᵀ(LLᵀ)y + fᵀy  s.t.  C·y ≤ d`.
pub struct QpProblem<'a, C: ConstraintSet + ?Sized> {
    pub factor: &'a LowerTriangular,
    pub linear: &'a [f64],
    pub constraints: &'a C,
}

impl<'a, C: ConstraintSet + ?Sized> QpProblem<'a, C> {
    pub fn new(factor: &'a LowerTriangular, linear: &'a [f64], constraints: &'a C) -> Result<Self> {
        let k = factor.order();
        if linear.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: linear.len() });
        }
        if constraints.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, got: constraints.dim() });
        }
        Ok(Self { factor, linear, constraints })
    }

    pub fn dim(&self) -> usize {
        self.factor.order()
    }

    pub fn objective(&self, y: &[f64]) -> f64 {
        // yᵀLLᵀy = ‖Lᵀy‖²
        let lt_y: Vec<f64> = (0..y.len()).map(|j| (j..y.len()).map(|i| self.factor.get(i, j) * y[i]).sum()).collect();
        0.5 * dot(&lt_y, &lt_y) + dot(self.linear, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QpasOptions {
    /// Cap on working-set changes; honored only at points where the search
    /// direction vanishes. `None` means no cap.
    pub max_iter: Option<usize>,
    /// Track `C·x` by `Cx ← Cx + α·Cp` instead of recomputing it.
    pub recurrence: bool,
    /// With `recurrence`, also recompute `C·x` directly after each step and
    /// record the largest deviation.
    pub measure_drift: bool,
    /// Multipliers down to `−multiplier_tol·max(1, ‖λ‖∞)` count as nonnegative.
    pub multiplier_tol: f64,
}

impl Default for QpasOptions {
    fn default() -> Self {
        Self { max_iter: None, recurrence: false, measure_drift: false, multiplier_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QpasTermination {
    Optimal,
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct QpasResult {
    pub x: Vec<f64>,
    /// Constraint indices in the order they entered.
    pub working_set: Vec<usize>,
    /// Multiplier of each working-set row, same order as `working_set`.
    pub multipliers: Vec<f64>,
    /// Number of working-set changes (additions plus removals).
    pub inner_iterations: usize,
    /// Number of loop passes, including full steps that changed nothing.
    pub steps: usize,
    pub terminated_by: QpasTermination,
    /// Largest `‖(Cx)_rec − C·x‖∞` seen (zero unless drift was measured).
    pub max_drift: f64,
    /// `‖g − QQᵀg‖∞` at exit, relative to `‖Lᵀx‖∞ + ‖L⁻¹f‖∞`.
    pub exit_step: f64,
    /// `max(C·x − d)` at exit; nonpositive for a feasible point.
    pub exit_infeasibility: f64,
}

/// Relative size below which a search direction counts as zero.
const ZERO_STEP_TOL: f64 = 1e-14;
/// Rows with `C_i·p ≤ CP_TOL·‖p‖·max‖C_i‖` are treated as not moving.
const CP_TOL: f64 = 1e-13;
/// Slack allowed when checking the initial point.
const START_TOL: f64 = 1e-8;

/// Iterate and cached factor data of the active-set method.
#[derive(Debug, Clone)]
pub struct QpasState {
    x: Vec<f64>,
    /// `L⁻¹f`.
    lf: Vec<f64>,
    working: Vec<usize>,
    in_working: Vec<bool>,
    /// Columns of `L⁻¹C_Wᵀ`.
    xcols: Vec<Vec<f64>>,
    /// Columns of `G⁻¹C_Wᵀ`.
    ycols: Vec<Vec<f64>>,
    qr: QRFactors,
    cx: Vec<f64>,
}

/// Multipliers and search direction at the current iterate.
#[derive(Debug, Clone)]
pub struct Stationarity {
    pub lambda: Vec<f64>,
    /// `p = L⁻ᵀ·Δw`.
    pub p: Vec<f64>,
    /// `‖Δw‖∞` with `Δw = −(g − QQᵀg)`.
    pub step_norm: f64,
    /// `‖Lᵀx‖∞ + ‖L⁻¹f‖∞`, the size of the terms making up `g`.
    pub scale: f64,
}

impl QpasState {
    /// Rebuilds the working-set data for a start point `x0` and working set
    /// `w0`, all of whose rows must be active at `x0`.
    pub fn new<C: ConstraintSet + ?Sized>(problem: &QpProblem<'_, C>, x0: Vec<f64>, w0: &[usize]) -> Result<Self> {
        let k = problem.dim();
        let c = problem.constraints;
        let t = c.len();
        if x0.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: x0.len() });
        }
        if w0.len() > k {
            return Err(Error::WorkingSetFull(k));
        }
        let lf = problem.factor.forward_solve(problem.linear)?;
        let cx = c.apply(&x0);
        for (i, &v) in cx.iter().enumerate() {
            let d = c.rhs(i);
            if d.is_finite() && v > d + START_TOL * (1.0 + d.abs()) {
                return Err(Error::InfeasibleStart { row: i, violation: v - d });
            }
        }
        let mut st = Self {
            x: x0,
            lf,
            working: Vec::with_capacity(w0.len()),
            in_working: vec![false; t],
            xcols: Vec::with_capacity(w0.len()),
            ycols: Vec::with_capacity(w0.len()),
            qr: QRFactors::new(k),
            cx,
        };
        for &j in w0 {
            if j >= t {
                return Err(Error::IndexOutOfRange { index: j, len: t });
            }
            if st.in_working[j] {
                return Err(Error::InvalidArgument(format!("constraint {j} listed twice in working set")));
            }
            let d = c.rhs(j);
            let gap = (st.cx[j] - d).abs();
            if !d.is_finite() || gap > START_TOL * (1.0 + d.abs()) {
                return Err(Error::InfeasibleStart { row: j, violation: gap });
            }
            st.push_column(problem.factor, j, &c.row(j))?;
        }
        Ok(st)
    }

    fn push_column(&mut self, factor: &LowerTriangular, j: usize, row: &[f64]) -> Result<()> {
        let xc = factor.forward_solve(row)?;
        let yc = factor.backward_solve(&xc)?;
        self.qr.append_column(&xc)?;
        self.xcols.push(xc);
        self.ycols.push(yc);
        self.working.push(j);
        self.in_working[j] = true;
        Ok(())
    }

    /// Adds row `j` to the working set, extending `X`, `Y` and the QR factors.
    pub fn add_constraint<C: ConstraintSet + ?Sized>(&mut self, problem: &QpProblem<'_, C>, j: usize) -> Result<()> {
        let t = self.in_working.len();
        if j >= t {
            return Err(Error::IndexOutOfRange { index: j, len: t });
        }
        if self.in_working[j] {
            return Err(Error::InvalidArgument(format!("constraint {j} already in working set")));
        }
        if self.working.len() >= self.x.len() {
            return Err(Error::WorkingSetFull(self.x.len()));
        }
        self.push_column(problem.factor, j, &problem.constraints.row(j))
    }

    /// Drops row `j` from the working set and downdates the cached data.
    pub fn remove_constraint(&mut self, j: usize) -> Result<()> {
        let pos = self.working.iter().position(|&w| w == j).ok_or(Error::NotInWorkingSet(j))?;
        self.qr.remove_column(pos)?;
        self.xcols.remove(pos);
        self.ycols.remove(pos);
        self.working.remove(pos);
        self.in_working[j] = false;
        Ok(())
    }

    /// Multipliers and step from the gradient `g = Lᵀx + L⁻¹f`.
    pub fn stationarity(&self, factor: &LowerTriangular) -> Result<Stationarity> {
        let ltx = factor.transpose_mul(&self.x)?;
        let scale = norm_inf(&ltx) + norm_inf(&self.lf);
        let mut dw: Vec<f64> = ltx.iter().zip(&self.lf).map(|(a, b)| -(a + b)).collect();
        // two projection passes keep Δw orthogonal to the working rows
        let mut qtg = vec![0.0; self.working.len()];
        for _ in 0..2 {
            let h = self.qr.q_tr_mul(&dw);
            for (j, &hj) in h.iter().enumerate() {
                qtg[j] += hj;
                axpy(-hj, self.qr.q_col(j), &mut dw);
            }
        }
        // Qᵀ(−g) accumulated above, so λ = R⁻¹·Qᵀ(−g)
        let lambda = self.qr.solve_upper(&qtg)?;
        let p = factor.backward_solve(&dw)?;
        Ok(Stationarity { lambda, p, step_norm: norm_inf(&dw), scale })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn working_set(&self) -> &[usize] {
        &self.working
    }

    pub fn qr(&self) -> &QRFactors {
        &self.qr
    }

    /// Columns of `L⁻¹C_Wᵀ`.
    pub fn x_columns(&self) -> &[Vec<f64>] {
        &self.xcols
    }

    /// Columns of `G⁻¹C_Wᵀ`.
    pub fn y_columns(&self) -> &[Vec<f64>] {
        &self.ycols
    }

    pub fn cx(&self) -> &[f64] {
        &self.cx
    }
}

/// Ratio test along `p`: `α = min(1, min (d_i − C_i·x)/(C_i·p))` over rows
/// outside the working set with `C_i·p > floor` and finite `d_i`. The blocking
/// row is reported only when `α < 1`; ties go to the smallest index.
pub fn step_length<C: ConstraintSet + ?Sized>(
    constraints: &C,
    cx: &[f64],
    cp: &[f64],
    in_working: &[bool],
    floor: f64,
) -> (f64, Option<usize>) {
    let mut alpha = 1.0;
    let mut blocking = None;
    for i in 0..constraints.len() {
        if in_working[i] || cp[i] <= floor {
            continue;
        }
        let d = constraints.rhs(i);
        if !d.is_finite() {
            continue;
        }
        let ratio = (d - cx[i]).max(0.0) / cp[i];
        if ratio < alpha {
            alpha = ratio;
            blocking = Some(i);
        }
    }
    (alpha, blocking)
}

/// `cx + α·cp`.
pub fn recursive_cx_update(cx: &[f64], cp: &[f64], alpha: f64) -> Vec<f64> {
    cx.iter().zip(cp).map(|(a, b)| a + alpha * b).collect()
}

/// Solves the QP from the feasible start `x0` with initial working set `w0`.
///
/// Exits only where the search direction is zero: either all multipliers are
/// nonnegative (`Optimal`) or the working-set change budget is used up
/// (`IterationCap`). In both cases the result is a feasible stationary point
/// on its working set. A hard limit of `10·(k + t)` loop passes guards against
/// cycling.
pub fn qpas_solve<C: ConstraintSet + ?Sized>(
    problem: &QpProblem<'_, C>,
    x0: Vec<f64>,
    w0: &[usize],
    opts: &QpasOptions,
) -> Result<QpasResult> {
    let k = problem.dim();
    let cons = problem.constraints;
    let t = cons.len();
    let mut st = QpasState::new(problem, x0, w0)?;
    let hard_cap = 10 * (k + t);
    let row_scale = if t > 0 { cons.max_row_norm() } else { 0.0 };
    let mut changes = 0usize;
    let mut steps = 0usize;
    let mut max_drift = 0.0f64;
    let mut at_minimum = false;

    let finish = |st: QpasState, s: Stationarity, how, changes, steps, max_drift| {
        let cx = cons.apply(&st.x);
        let exit_infeasibility = cx.iter().enumerate().fold(0.0f64, |m, (i, &v)| m.max(v - cons.rhs(i)));
        QpasResult {
            exit_step: s.step_norm / s.scale.max(f64::MIN_POSITIVE),
            exit_infeasibility,
            x: st.x,
            working_set: st.working,
            multipliers: s.lambda,
            inner_iterations: changes,
            steps,
            terminated_by: how,
            max_drift,
        }
    };

    loop {
        let mut s = st.stationarity(problem.factor)?;
        let moving = !at_minimum && st.working.len() < k && s.step_norm > ZERO_STEP_TOL * s.scale;

        if !moving {
            let lmax = norm_inf(&s.lambda);
            let mut drop: Option<(usize, f64)> = None;
            for (&j, &l) in st.working.iter().zip(&s.lambda) {
                match drop {
                    Some((dj, dl)) if l > dl || (l == dl && j > dj) => {}
                    _ => drop = Some((j, l)),
                }
            }
            let optimal = match drop {
                None => true,
                Some((_, l)) => l >= -opts.multiplier_tol * lmax.max(1.0),
            };
            if optimal {
                return Ok(finish(st, s, QpasTermination::Optimal, changes, steps, max_drift));
            }
            if opts.max_iter.is_some_and(|m| changes >= m) || steps >= hard_cap {
                return Ok(finish(st, s, QpasTermination::IterationCap, changes, steps, max_drift));
            }
            let (j, _) = drop.expect("nonempty working set");
            st.remove_constraint(j)?;
            changes += 1;
            steps += 1;
            at_minimum = false;
            continue;
        }
        let p = std::mem::take(&mut s.p);

        if steps >= hard_cap {
            return Ok(finish(st, s, QpasTermination::IterationCap, changes, steps, max_drift));
        }

        let cp = cons.apply(&p);
        let floor = CP_TOL * norm2(&p) * row_scale;
        // At a degenerate point roundoff can make a row that is numerically
        // dependent on the working set look blocking. Such rows are passed over
        // for this step and the next candidate is tried.
        let mut passed_over: Option<Vec<bool>> = None;
        let (alpha, blocking) = loop {
            let mask = passed_over.as_deref().unwrap_or(&st.in_working);
            let (alpha, blocking) = step_length(cons, &st.cx, &cp, mask, floor);
            let Some(j) = blocking else { break (alpha, None) };
            match st.add_constraint(problem, j) {
                Ok(()) => break (alpha, Some(j)),
                Err(Error::DegenerateColumn) => {
                    passed_over.get_or_insert_with(|| st.in_working.clone())[j] = true;
                }
                Err(e) => return Err(e),
            }
        };
        axpy(alpha, &p, &mut st.x);
        if opts.recurrence {
            axpy(alpha, &cp, &mut st.cx);
            if opts.measure_drift {
                let direct = cons.apply(&st.x);
                let d = st.cx.iter().zip(&direct).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                max_drift = max_drift.max(d);
            }
        } else {
            cons.apply_into(&st.x, &mut st.cx);
        }
        steps += 1;
        match blocking {
            Some(_) => {
                changes += 1;
                at_minimum = false;
            }
            None => at_minimum = true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    #[test]
    fn unconstrained_minimum() {
        let l = LowerTriangular::identity(2);
        let f = [-1.0, -1.0];
        let c = DenseConstraints::empty(2);
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let r = qpas_solve(&p, vec![0.0, 0.0], &[], &QpasOptions::default()).unwrap();
        assert_eq!(r.x, vec![1.0, 1.0]);
        assert!(r.working_set.is_empty());
        assert_eq!(r.terminated_by, QpasTermination::Optimal);
        assert_eq!(r.inner_iterations, 0);
    }

    #[test]
    fn single_active_bound() {
        let l = LowerTriangular::identity(1);
        let f = [-2.0];
        let c = DenseConstraints::new(1, vec![vec![1.0]], vec![1.0]).unwrap();
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let r = qpas_solve(&p, vec![0.0], &[], &QpasOptions::default()).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-15);
        assert_eq!(r.working_set, vec![0]);
        assert!((r.multipliers[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nearly_dependent_working_set_keeps_accurate_multipliers() {
        // rows y₁ ≤ 0 and y₁ + δy₂ ≤ 0 with target (2, δ, 1): the minimizer is
        // (0, 0, 1) with both multipliers 1, and cond(R) ≈ 1/δ
        let delta = 1e-7;
        let l = LowerTriangular::identity(3);
        let f = [-2.0, -delta, -1.0];
        let c = DenseConstraints::new(3, vec![vec![1.0, 0.0, 0.0], vec![1.0, delta, 0.0]], vec![0.0, 0.0]).unwrap();
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let r = qpas_solve(&p, vec![0.0; 3], &[0, 1], &QpasOptions::default()).unwrap();
        assert_eq!(r.terminated_by, QpasTermination::Optimal);
        assert!(r.x.iter().zip([0.0, 0.0, 1.0]).all(|(a, b)| (a - b).abs() < 1e-12), "{:?}", r.x);
        assert!(r.multipliers.iter().all(|l| (l - 1.0).abs() < 1e-6), "{:?}", r.multipliers);
    }

    #[test]
    fn step_length_cases() {
        let c = DenseConstraints::new(1, vec![vec![1.0]], vec![0.5]).unwrap();
        let (a, b) = step_length(&c, &[0.0], &[1.0], &[false], 0.0);
        assert_eq!((a, b), (0.5, Some(0)));
        let (a, b) = step_length(&c, &[0.0], &[-1.0], &[false], 0.0);
        assert_eq!((a, b), (1.0, None));
        let inf = DenseConstraints::new(1, vec![vec![1.0]], vec![f64::INFINITY]).unwrap();
        assert_eq!(step_length(&inf, &[0.0], &[1.0], &[false], 0.0), (1.0, None));
    }

    #[test]
    fn step_length_ties_go_to_smallest_index() {
        let c = DenseConstraints::new(1, vec![vec![1.0], vec![2.0]], vec![1.0, 2.0]).unwrap();
        let (a, b) = step_length(&c, &[0.0, 0.0], &[2.0, 4.0], &[false, false], 0.0);
        assert_eq!((a, b), (0.5, Some(0)));
    }

    #[test]
    fn recurrence_update() {
        let cx = [1.0, -2.0, 3.0];
        assert_eq!(recursive_cx_update(&cx, &[5.0, 5.0, 5.0], 0.0), cx.to_vec());
        let neg: Vec<f64> = cx.iter().map(|v| -v).collect();
        assert_eq!(recursive_cx_update(&cx, &neg, 1.0), vec![0.0; 3]);
    }

    #[test]
    fn add_from_empty_with_identity_factor() {
        let l = LowerTriangular::identity(3);
        let f = [0.0; 3];
        let c = DenseConstraints::new(3, vec![vec![1.0, 2.0, -1.0]], vec![0.0]).unwrap();
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let mut st = QpasState::new(&p, vec![0.0; 3], &[]).unwrap();
        st.add_constraint(&p, 0).unwrap();
        assert_eq!(st.x_columns()[0], vec![1.0, 2.0, -1.0]);
        assert_eq!(st.y_columns()[0], vec![1.0, 2.0, -1.0]);
        st.remove_constraint(0).unwrap();
        assert!(st.working_set().is_empty() && st.qr().is_empty());
        assert!(matches!(st.remove_constraint(0), Err(Error::NotInWorkingSet(0))));
    }

    #[test]
    fn start_checks() {
        let l = LowerTriangular::identity(1);
        let f = [0.0];
        let c = DenseConstraints::new(1, vec![vec![1.0]], vec![1.0]).unwrap();
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let o = QpasOptions::default();
        assert!(matches!(qpas_solve(&p, vec![2.0], &[], &o), Err(Error::InfeasibleStart { .. })));
        assert!(matches!(qpas_solve(&p, vec![0.0], &[0], &o), Err(Error::InfeasibleStart { .. })));
        let two = DenseConstraints::new(1, vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0]).unwrap();
        let p2 = QpProblem::new(&l, &f, &two).unwrap();
        assert!(matches!(qpas_solve(&p2, vec![0.0], &[0, 1], &o), Err(Error::WorkingSetFull(1))));
    }

    #[test]
    fn warm_start_at_optimum_needs_no_changes() {
        let g = DenseMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let l = LowerTriangular::factor(&g, 0.0).unwrap().unwrap();
        let f = [-4.0, -1.0];
        let c = DenseConstraints::boxed(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let p = QpProblem::new(&l, &f, &c).unwrap();
        let o = QpasOptions::default();
        let cold = qpas_solve(&p, vec![0.0, 0.0], &[], &o).unwrap();
        let warm = qpas_solve(&p, cold.x.clone(), &cold.working_set, &o).unwrap();
        assert_eq!(warm.inner_iterations, 0);
        assert_eq!(warm.working_set, cold.working_set);
        for (a, b) in warm.x.iter().zip(&cold.x) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
