//! Command-line front end: solve a BVLS problem from files, or run one of the
//! benchmark families and write its history files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use resqpass::experiments::{run_experiment, ExperimentSpec, Family};
use resqpass::operators::io::{read_matrix_market_file, read_vector_file, write_vector_file};
use resqpass::reference::kkt_report;
use resqpass::{solve, BvlsProblem, Factorization, PreconditionerKind, SolverConfig, ToleranceMode};

#[derive(Parser)]
#[command(
    name = "resqpass",
    version,
    about = "Bounded-variable least squares by residual subspace active-set iteration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve min ½‖Ax − b‖² s.t. ℓ ≤ x ≤ u with A in Matrix Market format.
    Solve(SolveArgs),
    /// Generate a benchmark instance, solve it and write history files.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix Market file holding A.
    matrix: PathBuf,
    /// Right-hand side b, one value per line.
    rhs: PathBuf,
    /// Lower bounds (default −∞), one value per line; `-inf` is accepted.
    #[arg(long)]
    lower: Option<PathBuf>,
    /// Upper bounds (default +∞).
    #[arg(long)]
    upper: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Directory for x.txt, solve.csv and solve.json. Without it x is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of bounded variables for the bvls family.
    #[arg(long)]
    imax: Option<usize>,
    /// Grid size for the contact family.
    #[arg(long)]
    grid: Option<usize>,
    /// Rows (cg, bvls) or columns of the data matrix (nmf).
    #[arg(long)]
    m: Option<usize>,
    /// Unknowns (cg, bvls) or rows of the data matrix (nmf).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cg,
    Bvls,
    Nmf,
    Contact,
}

#[derive(Clone, Copy, ValueEnum)]
enum TolMode {
    Rel,
    Abs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorArg {
    Cholesky,
    Mgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Overrides on top of the defaults (or the family's defaults for `bench`).
#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    tol_mode: Option<TolMode>,
    #[arg(long)]
    posdef_eps: Option<f64>,
    #[arg(long)]
    maxit_outer: Option<usize>,
    /// Cap on working-set changes per inner solve, or `none`.
    #[arg(long, value_parser = parse_cap)]
    maxit_inner: Option<Cap>,
    #[arg(long, value_enum)]
    factorization: Option<FactorArg>,
    #[arg(long, value_enum)]
    recurrence: Option<Switch>,
    /// `none` or `ilut:<tau>`.
    #[arg(long, value_parser = parse_precond)]
    precond: Option<PreconditionerKind>,
}

#[derive(Clone, Copy)]
struct Cap(Option<usize>);

fn parse_cap(s: &str) -> Result<Cap, String> {
    match s {
        "none" | "inf" => Ok(Cap(None)),
        _ => s.parse().map(|c| Cap(Some(c))).map_err(|e| format!("expected a count or `none`: {e}")),
    }
}

fn parse_precond(s: &str) -> Result<PreconditionerKind, String> {
    if s == "none" {
        return Ok(PreconditionerKind::None);
    }
    let tau = s.strip_prefix("ilut:").ok_or_else(|| format!("expected `none` or `ilut:<tau>`, got {s:?}"))?;
    tau.parse().map(PreconditionerKind::Ilut).map_err(|e| format!("bad drop tolerance {tau:?}: {e}"))
}

impl SolverArgs {
    fn apply(&self, mut cfg: SolverConfig) -> Result<SolverConfig> {
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = self.tol_mode {
            cfg.tol_mode = match m {
                TolMode::Rel => ToleranceMode::Relative,
                TolMode::Abs => ToleranceMode::Absolute,
            };
        }
        if let Some(e) = self.posdef_eps {
            cfg.posdef_eps = e;
        }
        if self.maxit_outer.is_some() {
            cfg.maxit_outer = self.maxit_outer;
        }
        if let Some(Cap(c)) = self.maxit_inner {
            cfg.maxit_inner = c;
        }
        if let Some(f) = self.factorization {
            cfg.factorization = match f {
                FactorArg::Cholesky => Factorization::Cholesky,
                FactorArg::Mgs => Factorization::GramSchmidt,
            };
        }
        if let Some(r) = self.recurrence {
            cfg.recurrence = matches!(r, Switch::On);
        }
        if let Some(p) = self.precond {
            cfg.preconditioner = p;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_bounds(path: Option<&Path>, n: usize, default: f64) -> Result<Vec<f64>> {
    let Some(path) = path else { return Ok(vec![default; n]) };
    let v = read_vector_file(path).with_context(|| format!("reading {}", path.display()))?;
    if v.len() != n {
        bail!("{} holds {} values, expected {n}", path.display(), v.len());
    }
    Ok(v)
}

fn run_solve(args: &SolveArgs) -> Result<()> {
    let a = read_matrix_market_file(&args.matrix).with_context(|| format!("reading {}", args.matrix.display()))?;
    let b = read_vector_file(&args.rhs).with_context(|| format!("reading {}", args.rhs.display()))?;
    let n = resqpass::LinearOperator::ncols(&a);
    let lower = read_bounds(args.lower.as_deref(), n, f64::NEG_INFINITY)?;
    let upper = read_bounds(args.upper.as_deref(), n, f64::INFINITY)?;
    let problem = BvlsProblem::new(a, b, lower, upper)?;
    let cfg = args.solver.apply(SolverConfig::default())?;

    let start = Instant::now();
    let out = solve(&problem, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let kkt = kkt_report(&problem.a, &problem.b, &problem.lower, &problem.upper, &out.x, &out.lambda, &out.mu)?;
    let summary = out.history.summary(kkt, wall_ms);
    eprintln!(
        "{} after {} outer / {} inner iterations, stationarity {:.3e}",
        summary.termination, summary.outer_iters, summary.total_inner_iters, summary.kkt.stationarity
    );

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_vector_file(dir.join("x.txt"), &out.x)?;
            fs::write(dir.join("solve.csv"), out.history.to_csv_string())?;
            fs::write(dir.join("solve.json"), summary.to_json()?)?;
        }
        None => {
            for v in &out.x {
                println!("{v:e}");
            }
        }
    }
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    let family = match args.family {
        FamilyArg::Cg => Family::Cg,
        FamilyArg::Bvls => Family::Bvls,
        FamilyArg::Nmf => Family::Nmf,
        FamilyArg::Contact => Family::Contact,
    };
    let mut spec = ExperimentSpec::new(family);
    spec.seed = args.seed;
    spec.i_max = args.imax.unwrap_or(spec.i_max);
    spec.grid = args.grid.unwrap_or(spec.grid);
    spec.m = args.m.unwrap_or(spec.m);
    spec.n = args.n.unwrap_or(spec.n);
    spec.config = args.solver.apply(spec.config)?;

    let report = run_experiment(&spec, &args.out)?;
    for run in &report.runs {
        let s = &run.summary;
        println!(
            "{}: {} after {} outer / {} inner iterations, {:.1} ms",
            run.name, s.termination, s.outer_iters, s.total_inner_iters, s.wall_ms
        );
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
