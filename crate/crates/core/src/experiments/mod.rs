//! Instance generators for the four benchmark families and a runner that
//! writes per-run history CSVs and JSON summaries.

mod generators;
mod nmf;
mod rng;

pub use generators::{contact_preconditioner, gen_contact, gen_random_ls, gen_tuneable, Instance, RandomLsMode};
pub use nmf::{als, gen_nmf, AlsResult, HalfStep, NmfInstance, NnlsBackend};
pub use rng::RngStream;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::operators::{LinearOperator, SparseMatrixCsr};
use crate::reference::{kkt_report, lsqr_solve, KktReport};
use crate::resqpass::{solve, BvlsProblem, ConvergenceHistory, IterationRecord, RunSummary, SolverConfig, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Unconstrained sparse least squares, compared against LSQR.
    Cg,
    /// Tunable number of bounded variables.
    Bvls,
    /// Nonnegative matrix factorization by alternating least squares.
    Nmf,
    /// Membrane contact problem.
    Contact,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cg => "cg",
            Family::Bvls => "bvls",
            Family::Nmf => "nmf",
            Family::Contact => "contact",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cg" => Ok(Family::Cg),
            "bvls" => Ok(Family::Bvls),
            "nmf" => Ok(Family::Nmf),
            "contact" => Ok(Family::Contact),
            other => Err(Error::InvalidArgument(format!("unknown experiment family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: Family,
    /// Rows (`cg`, `bvls`) or columns of the NMF data matrix.
    pub m: usize,
    /// Unknowns (`cg`, `bvls`) or rows of the NMF data matrix.
    pub n: usize,
    /// NMF rank.
    pub p: usize,
    /// Contact grid size.
    pub grid: usize,
    pub density: f64,
    pub i_max: usize,
    pub noise: f64,
    pub pressure: f64,
    pub ubound: f64,
    pub als_iters: usize,
    pub seed: u64,
    pub config: SolverConfig,
}

impl ExperimentSpec {
    /// Desk-scale defaults for a family.
    pub fn new(family: Family) -> Self {
        let (m, n) = match family {
            Family::Cg => (200, 120),
            Family::Bvls => (500, 300),
            Family::Nmf => (20, 30),
            Family::Contact => (0, 0),
        };
        let config = match family {
            Family::Contact => SolverConfig { tol: 1e-6, maxit_outer: Some(200), ..Default::default() },
            Family::Nmf => SolverConfig { tol: 1e-10, ..Default::default() },
            _ => SolverConfig::default(),
        };
        Self {
            family,
            m,
            n,
            p: 4,
            grid: 30,
            density: 0.04,
            i_max: 8,
            noise: 0.1,
            pressure: 4.0,
            ubound: 0.1,
            als_iters: 10,
            seed: 0,
            config,
        }
    }
}

/// One solver run inside an experiment.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub history: ConvergenceHistory,
    pub summary: RunSummary,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub runs: Vec<RunReport>,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn run(&self, name: &str) -> Option<&RunReport> {
        self.runs.iter().find(|r| r.name == name)
    }
}

fn resqpass_run(name: String, problem: &BvlsProblem<SparseMatrixCsr>, cfg: &SolverConfig) -> Result<RunReport> {
    let start = Instant::now();
    let out = solve(problem, cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let kkt = kkt_report(&problem.a, &problem.b, &problem.lower, &problem.upper, &out.x, &out.lambda, &out.mu)?;
    let summary = out.history.summary(kkt, wall_ms);
    Ok(RunReport { name, summary, history: out.history, x: out.x })
}

fn lsqr_run<A: LinearOperator>(name: String, problem: &BvlsProblem<A>, cfg: &SolverConfig) -> Result<RunReport> {
    let start = Instant::now();
    let maxit = cfg.maxit_outer.unwrap_or(3 * problem.ncols() + 10);
    let res = lsqr_solve(&problem.a, &problem.b, cfg.tol, maxit)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let records = res
        .normal_resnorms
        .iter()
        .zip(&res.resnorms)
        .enumerate()
        .map(|(k, (&g, &r))| IterationRecord {
            k,
            resnorm: g,
            objective: 0.5 * r * r,
            inner_iters: 0,
            ws_size: 0,
            ms: 0.0,
        })
        .collect();
    let converged = res.normal_resnorms.last().is_some_and(|&g| g <= cfg.tol * res.normal_resnorms[0]);
    let history = ConvergenceHistory {
        records,
        termination: Some(if converged { Termination::ResidualTol } else { Termination::Maxit }),
        iterates: Vec::new(),
        working_sets: Vec::new(),
    };
    let n = problem.ncols();
    let zeros = vec![0.0; n];
    let kkt = kkt_report(&problem.a, &problem.b, &problem.lower, &problem.upper, &res.x, &zeros, &zeros)?;
    let summary = history.summary(kkt, wall_ms);
    Ok(RunReport { name, summary, history, x: res.x })
}

fn nmf_run(spec: &ExperimentSpec) -> Result<RunReport> {
    // the data matrix is n × m
    let inst = gen_nmf(spec.n, spec.m, spec.p, spec.noise, spec.seed)?;
    let start = Instant::now();
    let res = als(&inst.a, &inst.x_init, spec.als_iters, &NnlsBackend::ResQpass(spec.config))?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut elapsed = 0.0;
    let records = res
        .steps
        .iter()
        .enumerate()
        .map(|(k, s)| {
            elapsed += s.ms;
            IterationRecord {
                k: k + 1,
                resnorm: s.frobenius,
                objective: 0.5 * s.frobenius * s.frobenius,
                inner_iters: s.inner_iters,
                ws_size: s.ws_size,
                ms: elapsed,
            }
        })
        .collect();
    let history = ConvergenceHistory {
        records,
        termination: Some(Termination::Maxit),
        iterates: Vec::new(),
        working_sets: Vec::new(),
    };
    let min_entry = res.x.as_slice().iter().chain(res.y.as_slice()).fold(f64::INFINITY, |m, &v| m.min(v));
    let kkt = KktReport {
        stationarity: res.final_objective(),
        max_bound_violation: (-min_entry).max(0.0),
        max_complementarity: 0.0,
        min_multiplier: 0.0,
    };
    let summary = history.summary(kkt, wall_ms);
    let mut x = res.x.as_slice().to_vec();
    x.extend_from_slice(res.y.as_slice());
    Ok(RunReport { name: "nmf_resqpass".into(), summary, history, x })
}

/// Generates the instance, runs ResQPASS (plus LSQR for `cg`) and writes
/// `<run>.csv` and `<run>.json` for every run into `out_dir`.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path) -> Result<ExperimentReport> {
    let family = spec.family.name();
    let runs = match spec.family {
        Family::Cg => {
            let inst = gen_random_ls(spec.m, spec.n, spec.density, RandomLsMode::Ex24, spec.seed)?;
            vec![
                resqpass_run(format!("{family}_resqpass"), &inst.problem, &spec.config)?,
                lsqr_run(format!("{family}_lsqr"), &inst.problem, &spec.config)?,
            ]
        }
        Family::Bvls => {
            let inst = gen_tuneable(spec.m, spec.n, spec.density, spec.i_max, spec.seed)?;
            vec![resqpass_run(format!("{family}_resqpass"), &inst.problem, &spec.config)?]
        }
        Family::Nmf => vec![nmf_run(spec)?],
        Family::Contact => {
            let problem = gen_contact(spec.grid, spec.pressure, spec.ubound)?;
            let suffix = match spec.config.preconditioner {
                crate::resqpass::PreconditionerKind::None => "resqpass",
                crate::resqpass::PreconditionerKind::Ilut(_) => "resqpass_ilut",
            };
            vec![resqpass_run(format!("{family}_{suffix}"), &problem, &spec.config)?]
        }
    };

    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for run in &runs {
        let csv = out_dir.join(format!("{}.csv", run.name));
        fs::write(&csv, run.history.to_csv_string())?;
        let json = out_dir.join(format!("{}.json", run.name));
        fs::write(&json, run.summary.to_json()?)?;
        files.push(csv);
        files.push(json);
    }
    Ok(ExperimentReport { runs, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Cg, Family::Bvls, Family::Nmf, Family::Contact] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("lp".parse::<Family>().is_err());
    }

    #[test]
    fn small_bvls_run_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let spec = ExperimentSpec { m: 60, n: 30, density: 0.2, i_max: 4, ..ExperimentSpec::new(Family::Bvls) };
        let rep = run_experiment(&spec, dir.path()).unwrap();
        assert_eq!(rep.files.len(), 2);
        let csv = fs::read_to_string(&rep.files[0]).unwrap();
        assert!(csv.starts_with(crate::resqpass::CSV_HEADER));
        assert_eq!(rep.runs[0].summary.termination, "residual-tol");
    }
}
