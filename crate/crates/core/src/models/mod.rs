//! Driven example systems. Each run returns a [`Run`] holding the sampled
//! [`TrajectoryRecord`] together with the system state at every retained
//! sample.

mod gaussian;
mod maser;
mod qubit;
mod squeezed;

pub use gaussian::{gaussian_entropy, gaussian_occupation_u, GaussianState};
pub use maser::{
    maser_density, maser_reference_state, maser_rhs, run_maser, MaserParams, MaserSystem,
};
pub use qubit::{
    qubit_alpha, qubit_reference_state, qubit_sigma_a, qubit_state, run_qubit, QubitParams,
};
pub use squeezed::{
    bz_occupation, run_squeezed, squeezed_alpha, squeezed_rhs, squeezed_sigma_a, SqueezedParams,
    SqueezedSystem,
};

use crate::dynamics::TrajectoryRecord;
use crate::{Error, Result};

/// How the maser bound is advanced between samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    /// First-order update from flux increments (`α += δΦ/g`, `Σ̃ += (1−α)δΦ`).
    #[default]
    Incremental,
    /// Solve for `α` from the accumulated flux at every sample.
    Resolve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Keep every k-th integrator step (the final step is always kept).
    pub sample_every: usize,
    pub mode: BoundMode,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            t_max: 10.0,
            dt: 1e-3,
            sample_every: 10,
            mode: BoundMode::Incremental,
        }
    }
}

impl RunOptions {
    pub fn new(t_max: f64, dt: f64) -> Self {
        Self {
            t_max,
            dt,
            ..Self::default()
        }
    }

    pub fn sample_every(self, sample_every: usize) -> Self {
        Self {
            sample_every,
            ..self
        }
    }

    pub fn mode(self, mode: BoundMode) -> Self {
        Self { mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if !(self.dt > 0.0) || self.dt > self.t_max {
            return Err(Error::InvalidParams(format!(
                "need 0 < dt <= t_max, got dt = {}",
                self.dt
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParams("sample_every must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn retained(&self, step: usize, last: usize) -> bool {
        step % self.sample_every == 0 || step == last
    }
}

/// Output of a model run.
#[derive(Debug, Clone)]
pub struct Run<S> {
    pub record: TrajectoryRecord,
    /// System state at each retained sample.
    pub states: Vec<S>,
    pub sigma_a: f64,
    /// Largest violation of the `α` constraint seen at a retained sample.
    pub max_constraint_residual: f64,
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}
