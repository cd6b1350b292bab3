//! Entropy production and its entropy-flux upper bound for open quantum
//! systems whose flux is the change of a system observable `ln ρ*`.
//!
//! The crate is organized bottom-up:
//!
//! - [`quantum`]: density matrices, Hermitian eigendecomposition, von Neumann
//!   and relative entropy.
//! - [`maxent`]: the reference potential `ρ*`, the partition function
//!   `Z(α) = tr (ρ*)^α`, the unique solve for the dynamic temperature `α`,
//!   and the closed-form, incremental and rate-form bound evaluators.
//! - [`dynamics`]: fixed-step RK4 and the sampled trajectory record.
//! - [`models`]: driven examples (analytic qubit, three-level maser,
//!   bosonic mode in a squeezed bath).
//!
//! Units: ħ = k_B = 1, entropies in nats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
mod error;
pub mod maxent;
pub mod models;
pub mod quantum;
pub mod sampling;

pub use dynamics::{integrate, rk4_step, FnSystem, OdeSystem, Sample, TrajectoryRecord};
pub use error::{Error, Result};
pub use maxent::{
    adiabatic_entropy_production, bound_closed_form, bound_rate_form, bound_rate_form_series,
    constraint_f, constraint_f_prime, flux_from_potential, log_partition, sigma_state, solve_alpha,
    BoundTracker, ClosedFormBound, ReferencePotential,
};
pub use models::{
    BoundMode, GaussianState, MaserParams, QubitParams, Run, RunOptions, SqueezedParams,
};
pub use quantum::{
    eigendecompose, expectation_log_potential, relative_entropy, validate_density,
    von_neumann_entropy, CMatrix, DensityMatrix, Spectrum, C64,
};
