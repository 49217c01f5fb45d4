use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::reference::KktReport;

pub const CSV_HEADER: &str = "k,resnorm,objective,inner_iters,ws_size,ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ResidualTol,
    PosdefLost,
    Maxit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ResidualTol => "residual-tol",
            Termination::PosdefLost => "posdef-lost",
            Termination::Maxit => "maxit",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One outer iteration. Row `k = 0` describes the starting point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub resnorm: f64,
    /// `½‖A·x_k − b‖²`.
    pub objective: f64,
    pub inner_iters: usize,
    pub ws_size: usize,
    /// Milliseconds since the solve started (monotonic clock).
    pub ms: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ConvergenceHistory {
    pub records: Vec<IterationRecord>,
    pub termination: Option<Termination>,
    /// Projected solution `y_k` per outer iteration, when requested.
    pub iterates: Vec<Vec<f64>>,
    /// Working set after each outer iteration, when requested.
    pub working_sets: Vec<Vec<usize>>,
}

impl ConvergenceHistory {
    pub fn outer_iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn total_inner_iterations(&self) -> usize {
        self.records.iter().map(|r| r.inner_iters).sum()
    }

    pub fn resnorms(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.resnorm).collect()
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.objective).collect()
    }

    /// True when no objective rises by more than `rel·|previous|`.
    pub fn objective_monotone(&self, rel: f64) -> bool {
        self.records.windows(2).all(|w| w[1].objective <= w[0].objective + rel * w[0].objective.abs())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(w, "{},{:e},{:e},{},{},{:.3}", r.k, r.resnorm, r.objective, r.inner_iters, r.ws_size, r.ms)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn summary(&self, kkt: KktReport, wall_ms: f64) -> RunSummary {
        RunSummary {
            termination: self.termination.map_or("none", Termination::as_str).to_string(),
            outer_iters: self.outer_iterations(),
            total_inner_iters: self.total_inner_iterations(),
            kkt,
            wall_ms,
        }
    }
}

/// JSON summary of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub termination: String,
    pub outer_iters: usize,
    pub total_inner_iters: usize,
    pub kkt: KktReport,
    pub wall_ms: f64,
}

impl RunSummary {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
