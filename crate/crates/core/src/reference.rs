//! Independent baselines for checking the solver: LSQR, an exhaustive BVLS
//! oracle, projected-gradient BVLS and a KKT checker for the full problem.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dense::{axpy, dot, norm2, scale, DenseMatrix};
use crate::error::{Error, Result};
use crate::operators::LinearOperator;

#[derive(Debug, Clone)]
pub struct LsqrResult {
    pub x: Vec<f64>,
    /// `‖Aᵀ(A·x_k − b)‖` for `k = 0, 1, …`, computed directly.
    pub normal_resnorms: Vec<f64>,
    /// `‖A·x_k − b‖` for `k = 0, 1, …`.
    pub resnorms: Vec<f64>,
    pub iterations: usize,
}

/// Golub-Kahan LSQR without reorthogonalization. Stops when
/// `‖Aᵀ(A·x − b)‖ ≤ tol·‖Aᵀb‖` or after `maxit` iterations.
pub fn lsqr_solve<A: LinearOperator + ?Sized>(a: &A, b: &[f64], tol: f64, maxit: usize) -> Result<LsqrResult> {
    let n = a.ncols();
    let mut x = vec![0.0; n];
    let atb = a.apply_adjoint(b)?;
    let r0 = norm2(&atb);
    let mut out = LsqrResult { x: x.clone(), normal_resnorms: vec![r0], resnorms: vec![norm2(b)], iterations: 0 };
    if r0 == 0.0 {
        return Ok(out);
    }

    let mut u = b.to_vec();
    let mut beta = norm2(&u);
    scale(1.0 / beta, &mut u);
    let mut v = a.apply_adjoint(&u)?;
    let mut alpha = norm2(&v);
    scale(1.0 / alpha, &mut v);
    let mut w = v.clone();
    let mut phi_bar = beta;
    let mut rho_bar = alpha;

    for it in 1..=maxit {
        // bidiagonalization step
        let mut au = a.apply(&v)?;
        axpy(-alpha, &u, &mut au);
        u = au;
        beta = norm2(&u);
        if beta > 0.0 {
            scale(1.0 / beta, &mut u);
        }
        let mut atu = a.apply_adjoint(&u)?;
        axpy(-beta, &v, &mut atu);
        let next_v = atu;
        let next_alpha = norm2(&next_v);

        // plane rotation eliminating beta
        let rho = rho_bar.hypot(beta);
        let c = rho_bar / rho;
        let s = beta / rho;
        let theta = s * next_alpha;
        rho_bar = -c * next_alpha;
        let phi = c * phi_bar;
        phi_bar *= s;

        axpy(phi / rho, &w, &mut x);
        v = next_v;
        alpha = next_alpha;
        if alpha > 0.0 {
            scale(1.0 / alpha, &mut v);
        }
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi = vi - (theta / rho) * *wi;
        }

        let mut res = a.apply(&x)?;
        axpy(-1.0, b, &mut res);
        let nr = norm2(&a.apply_adjoint(&res)?);
        out.normal_resnorms.push(nr);
        out.resnorms.push(norm2(&res));
        out.iterations = it;
        if nr <= tol * r0 || alpha == 0.0 || beta == 0.0 {
            break;
        }
    }
    out.x = x;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvlsSolution {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    /// Per variable: `-1` at lower bound, `1` at upper bound, `0` free.
    pub assignment: Vec<i8>,
}

impl BvlsSolution {
    /// Active bound rows in the solver's numbering: `i` for lower, `n + i`
    /// for upper, sorted.
    pub fn active_rows(&self) -> Vec<usize> {
        let n = self.x.len();
        let mut rows: Vec<usize> = self
            .assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| match s {
                -1 => Some(i),
                1 => Some(n + i),
                _ => None,
            })
            .collect();
        rows.sort_unstable();
        rows
    }
}

pub const ORACLE_MAX_N: usize = 12;

/// Exhaustive BVLS: tries every assignment of the variables to
/// {lower, upper, free}, solves the reduced least-squares problem and keeps
/// the best assignment that satisfies the KKT conditions. Ties on the
/// objective keep the first assignment in enumeration order.
pub fn brute_force_bvls(a: &DenseMatrix, b: &[f64], lower: &[f64], upper: &[f64]) -> Result<BvlsSolution> {
    let (m, n) = (a.nrows(), a.ncols());
    if n > ORACLE_MAX_N {
        return Err(Error::InvalidArgument(format!("oracle supports n ≤ {ORACLE_MAX_N}, got {n}")));
    }
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    if lower.len() != n || upper.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lower.len().min(upper.len()) });
    }
    let am = DMatrix::from_column_slice(m, n, a.as_slice());
    let bv = DVector::from_column_slice(b);
    let gram = am.transpose() * &am;
    let atb = am.transpose() * &bv;
    let mult_tol = 1e-10 * (1.0 + atb.amax());
    let feas_tol = 1e-10;

    let mut best: Option<(f64, BvlsSolution)> = None;
    let mut assign = vec![0i8; n];
    let total = 3usize.pow(n as u32);
    'outer: for code in 0..total {
        let mut c = code;
        for s in assign.iter_mut() {
            *s = (c % 3) as i8 - 1;
            c /= 3;
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            match assign[i] {
                -1 if lower[i].is_finite() => x[i] = lower[i],
                1 if upper[i].is_finite() => x[i] = upper[i],
                0 => {}
                _ => continue 'outer,
            }
        }
        let free: Vec<usize> = (0..n).filter(|&i| assign[i] == 0).collect();
        if !free.is_empty() {
            // (AᵀA)_FF x_F = (Aᵀb)_F − (AᵀA)_FB x_B
            let nf = free.len();
            let gff = DMatrix::from_fn(nf, nf, |i, j| gram[(free[i], free[j])]);
            let rhs = DVector::from_fn(nf, |i, _| {
                let fi = free[i];
                atb[fi] - (0..n).filter(|&j| assign[j] != 0).map(|j| gram[(fi, j)] * x[j]).sum::<f64>()
            });
            let Some(ch) = gff.cholesky() else { continue };
            let xf = ch.solve(&rhs);
            for (k, &i) in free.iter().enumerate() {
                if !(xf[k] >= lower[i] - feas_tol && xf[k] <= upper[i] + feas_tol) {
                    continue 'outer;
                }
                x[i] = xf[k];
            }
        }
        let xv = DVector::from_column_slice(&x);
        let grad = &gram * &xv - &atb;
        let mut lambda = vec![0.0; n];
        let mut mu = vec![0.0; n];
        for i in 0..n {
            match assign[i] {
                -1 => lambda[i] = grad[i],
                1 => mu[i] = -grad[i],
                _ => {}
            }
            if lambda[i] < -mult_tol || mu[i] < -mult_tol {
                continue 'outer;
            }
        }
        let res = &am * &xv - &bv;
        let obj = 0.5 * res.norm_squared();
        if best.as_ref().is_none_or(|(o, _)| obj < *o) {
            best = Some((obj, BvlsSolution { x, lambda, mu, assignment: assign.clone() }));
        }
    }
    best.map(|(_, s)| s).ok_or_else(|| Error::InvalidArgument("no assignment satisfies the KKT conditions".into()))
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((xi, &l), &u) in x.iter_mut().zip(lower).zip(upper) {
        *xi = xi.max(l).min(u);
    }
}

/// Largest eigenvalue of `AᵀA` by power iteration.
pub fn normal_spectral_radius<A: LinearOperator + ?Sized>(a: &A, iters: usize) -> Result<f64> {
    let n = a.ncols();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64 * 0.1).collect();
    let mut est = 0.0;
    for _ in 0..iters {
        let nv = norm2(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        scale(1.0 / nv, &mut v);
        let w = a.apply_adjoint(&a.apply(&v)?)?;
        est = dot(&v, &w);
        v = w;
    }
    Ok(est)
}

/// Accelerated projected gradient (FISTA with gradient restart) for BVLS,
/// started at the projection of `x0`. Stops when the projected-gradient step
/// changes `x` by at most `tol·(1 + ‖x‖∞)` or after `maxit` iterations.
pub fn projected_gradient_bvls<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    lower: &[f64],
    upper: &[f64],
    x0: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<Vec<f64>> {
    let n = a.ncols();
    if x0.len() != n || lower.len() != n || upper.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    let lip = 1.01 * normal_spectral_radius(a, 100)?;
    if lip == 0.0 {
        let mut x = x0.to_vec();
        project(&mut x, lower, upper);
        return Ok(x);
    }
    let step = 1.0 / lip;
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let mut yk = x.clone();
    let mut t = 1.0f64;
    for _ in 0..maxit {
        let mut res = a.apply(&yk)?;
        axpy(-1.0, b, &mut res);
        let g = a.apply_adjoint(&res)?;
        let mut xn = yk.clone();
        axpy(-step, &g, &mut xn);
        project(&mut xn, lower, upper);
        let change = xn.iter().zip(&x).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        // restart momentum when it points uphill
        let uphill: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (p, q))| gi * (p - q)).sum();
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        if uphill > 0.0 {
            t = 1.0;
            yk = xn.clone();
        } else {
            yk = xn.iter().zip(&x).map(|(p, q)| p + ((t - 1.0) / tn) * (p - q)).collect();
            t = tn;
        }
        x = xn;
        if change <= tol * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
    }
    Ok(x)
}

/// Nonnegative least squares by projected gradient.
pub fn projected_gradient_nnls<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<Vec<f64>> {
    let n = a.ncols();
    projected_gradient_bvls(a, b, &vec![0.0; n], &vec![f64::INFINITY; n], x0, tol, maxit)
}

/// Fixes the variables that sit on a bound (within `tol`) and solves the
/// remaining unconstrained least-squares problem exactly. Returns `None` when
/// the reduced solution leaves the box.
pub fn polish_bvls(a: &DenseMatrix, b: &[f64], lower: &[f64], upper: &[f64], x: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = a.ncols();
    let mut xp = x.to_vec();
    let mut free = Vec::new();
    for i in 0..n {
        if (x[i] - lower[i]).abs() <= tol {
            xp[i] = lower[i];
        } else if (x[i] - upper[i]).abs() <= tol {
            xp[i] = upper[i];
        } else {
            free.push(i);
        }
    }
    if free.is_empty() {
        return Some(xp);
    }
    let m = a.nrows();
    let mut rhs = b.to_vec();
    for j in (0..n).filter(|j| !free.contains(j)) {
        axpy(-xp[j], a.col(j), &mut rhs);
    }
    let af = DMatrix::from_fn(m, free.len(), |i, k| a[(i, free[k])]);
    let g = af.transpose() * &af;
    let r = af.transpose() * DVector::from_column_slice(&rhs);
    let xf = g.cholesky()?.solve(&r);
    for (k, &i) in free.iter().enumerate() {
        if xf[k] < lower[i] - tol || xf[k] > upper[i] + tol {
            return None;
        }
        xp[i] = xf[k];
    }
    Some(xp)
}

/// Violations of the first-order optimality conditions of BVLS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktReport {
    /// `‖Aᵀ(A·x − b) − λ + μ‖₂`.
    pub stationarity: f64,
    /// `max(ℓ − x, x − u, 0)` over all entries.
    pub max_bound_violation: f64,
    /// `max |λᵢ(xᵢ − ℓᵢ)|, |μᵢ(uᵢ − xᵢ)|` over finite bounds.
    pub max_complementarity: f64,
    /// Smallest entry of `λ` and `μ`; negative means a sign violation.
    pub min_multiplier: f64,
}

impl KktReport {
    /// Largest of stationarity, bound and complementarity violations and the
    /// negative part of the smallest multiplier.
    pub fn max_violation(&self) -> f64 {
        self.stationarity.max(self.max_bound_violation).max(self.max_complementarity).max(-self.min_multiplier.min(0.0))
    }
}

pub fn kkt_report<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    lower: &[f64],
    upper: &[f64],
    x: &[f64],
    lambda: &[f64],
    mu: &[f64],
) -> Result<KktReport> {
    let n = a.ncols();
    for v in [lower, upper, x, lambda, mu] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let mut res = a.apply(x)?;
    axpy(-1.0, b, &mut res);
    let mut g = a.apply_adjoint(&res)?;
    for i in 0..n {
        g[i] += mu[i] - lambda[i];
    }
    let mut bound = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..n {
        bound = bound.max(lower[i] - x[i]).max(x[i] - upper[i]);
        if lower[i].is_finite() {
            comp = comp.max((lambda[i] * (x[i] - lower[i])).abs());
        }
        if upper[i].is_finite() {
            comp = comp.max((mu[i] * (upper[i] - x[i])).abs());
        }
    }
    let min_multiplier = lambda.iter().chain(mu).fold(f64::INFINITY, |m, &v| m.min(v));
    Ok(KktReport {
        stationarity: norm2(&g),
        max_bound_violation: bound,
        max_complementarity: comp,
        min_multiplier: if min_multiplier.is_finite() { min_multiplier } else { 0.0 },
    })
}
