use std::fmt;
use std::time::{Duration, Instant};

use entroflux_core::models::{run_maser, run_qubit, run_squeezed};
use entroflux_core::{Result, TrajectoryRecord};

use crate::config::{ModelKind, ModelParams, ScenarioConfig};

/// Largest tolerated negative gap `Σ̃ − Σ` for each model.
pub fn gap_tolerance(model: ModelKind) -> f64 {
    match model {
        ModelKind::Qubit => 1e-9,
        ModelKind::Maser => 1e-8,
        ModelKind::Squeezed => 1e-6,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub model: ModelKind,
    pub sigma: f64,
    pub sigma_bound: f64,
    pub gap: f64,
    pub max_constraint_residual: f64,
    pub max_negative_gap: f64,
    pub tolerance: f64,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.max_negative_gap <= self.tolerance
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] sigma={:.6e} bound={:.6e} gap={:.6e} residual={:.2e} negative_gap={:.2e} (tol {:.0e}) wall={:.3}s",
            self.model.name(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.sigma,
            self.sigma_bound,
            self.gap,
            self.max_constraint_residual,
            self.max_negative_gap,
            self.tolerance,
            self.wall_time.as_secs_f64(),
        )
    }
}

/// Runs the configured model and summarizes its final state.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<(TrajectoryRecord, RunReport)> {
    let start = Instant::now();
    let opts = cfg.run_options();
    let (record, residual) = match &cfg.params {
        ModelParams::Qubit(p) => {
            let run = run_qubit(p, &opts)?;
            (run.record, run.max_constraint_residual)
        }
        ModelParams::Maser(p) => {
            let run = run_maser(p, &opts)?;
            (run.record, run.max_constraint_residual)
        }
        ModelParams::Squeezed(p) => {
            let run = run_squeezed(p, &opts)?;
            (run.record, run.max_constraint_residual)
        }
    };
    let last = *record
        .last()
        .expect("a run always records its initial state");
    let report = RunReport {
        model: cfg.model(),
        sigma: last.sigma,
        sigma_bound: last.sigma_bound,
        gap: last.gap,
        max_constraint_residual: residual,
        max_negative_gap: record.max_negative_gap(),
        tolerance: gap_tolerance(cfg.model()),
        wall_time: start.elapsed(),
    };
    log::debug!("{report}");
    Ok((record, report))
}
