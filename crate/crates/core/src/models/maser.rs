//! Three-level amplifier relaxing with its driving field switched off.
//!
//! Levels (0, 1) couple to bath 1 and (0, 2) to bath 2; only the 1–2
//! coherence survives. State vector: `(p₁, p₂, Re c, Im c)` with
//! `p₀ = 1 − p₁ − p₂`.

use crate::dynamics::step_count;
use crate::dynamics::{integrate, OdeSystem, Sample, TrajectoryRecord};
use crate::maxent::{constraint_f, BoundTracker, ClosedFormBound, ReferencePotential};
use crate::models::{require, BoundMode, Run, RunOptions};
use crate::quantum::{validate_density, von_neumann_entropy, CMatrix, DensityMatrix, C64};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserParams {
    /// `Δ₁ = E₁ − E₀`
    pub delta1: f64,
    /// `Δ₂ = E₂ − E₀`
    pub delta2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Dephasing rate Γ_d.
    pub gamma_d: f64,
    pub p1_0: f64,
    pub p2_0: f64,
    pub c0: C64,
}

impl MaserParams {
    /// The relaxation example with a coherent start:
    /// `(p₁, p₂, c) = (0.3, 0.3, 0.1)`, `Δ = (1, 2)`, `T = (1, 0.5)`,
    /// `λ₁ = λ₂ = 1`, `Γ_d = 1.2`.
    pub fn reference_example() -> Self {
        Self {
            delta1: 1.0,
            delta2: 2.0,
            beta1: 1.0,
            beta2: 2.0,
            lambda1: 1.0,
            lambda2: 1.0,
            gamma_d: 1.2,
            p1_0: 0.3,
            p2_0: 0.3,
            c0: C64::new(0.1, 0.0),
        }
    }

    /// Same dynamics, started at the populations of `ρ*` with no coherence.
    pub fn at_fixed_point(self) -> Self {
        let (w1, w2) = self.boltzmann();
        let p0 = 1.0 / (1.0 + w1 + w2);
        Self {
            p1_0: w1 * p0,
            p2_0: w2 * p0,
            c0: C64::new(0.0, 0.0),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("gamma_d", self.gamma_d),
        ] {
            require(v >= 0.0 && v.is_finite(), || {
                format!("{name} must be >= 0, got {v}")
            })?;
        }
        for (name, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
        ] {
            require(v.is_finite(), || format!("{name} must be finite"))?;
        }
        require(self.p1_0 >= 0.0 && self.p2_0 >= 0.0, || {
            "initial populations must be >= 0".into()
        })?;
        require(self.p1_0 + self.p2_0 <= 1.0, || {
            format!("p1(0) + p2(0) = {} exceeds 1", self.p1_0 + self.p2_0)
        })?;
        require(self.c0.norm_sqr() <= self.p1_0 * self.p2_0, || {
            format!("|c(0)|^2 = {} exceeds p1(0) p2(0)", self.c0.norm_sqr())
        })?;
        Ok(())
    }

    /// `(e^{−β₁Δ₁}, e^{−β₂Δ₂})`
    pub fn boltzmann(&self) -> (f64, f64) {
        (
            (-self.beta1 * self.delta1).exp(),
            (-self.beta2 * self.delta2).exp(),
        )
    }

    pub fn initial_vector(&self) -> [f64; 4] {
        [self.p1_0, self.p2_0, self.c0.re, self.c0.im]
    }
}

/// Right-hand side of the population/coherence equations.
#[derive(Debug, Clone, Copy)]
pub struct MaserSystem {
    params: MaserParams,
    w1: f64,
    w2: f64,
}

impl OdeSystem for MaserSystem {
    fn dim(&self) -> usize {
        4
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let p = &self.params;
        let (p1, p2) = (y[0], y[1]);
        let c = C64::new(y[2], y[3]);
        dy[0] = -p.lambda1 * (1.0 + self.w1) * p1 + p.lambda1 * self.w1 * (1.0 - p2);
        dy[1] = -p.lambda2 * (1.0 + self.w2) * p2 + p.lambda2 * self.w2 * (1.0 - p1);
        let dc = C64::new(-p.gamma_d, p.delta1 - p.delta2) * c;
        dy[2] = dc.re;
        dy[3] = dc.im;
    }
}

pub fn maser_rhs(params: &MaserParams) -> MaserSystem {
    let (w1, w2) = params.boltzmann();
    MaserSystem {
        params: *params,
        w1,
        w2,
    }
}

/// `ρ* ∝ |0⟩⟨0| + e^{−β₁Δ₁}|1⟩⟨1| + e^{−β₂Δ₂}|2⟩⟨2|`.
pub fn maser_reference_state(params: &MaserParams) -> Result<ReferencePotential> {
    let (w1, w2) = params.boltzmann();
    ReferencePotential::from_weights(&[1.0, w1, w2])
}

/// Density matrix (or its time derivative) from a packed state vector.
pub fn maser_density(y: &[f64]) -> CMatrix {
    let z = C64::new(0.0, 0.0);
    let c = C64::new(y[2], y[3]);
    let p0 = 1.0 - y[0] - y[1];
    CMatrix::from_row_slice(
        3,
        3,
        &[
            C64::new(p0, 0.0),
            z,
            z,
            z,
            C64::new(y[0], 0.0),
            c,
            z,
            c.conj(),
            C64::new(y[1], 0.0),
        ],
    )
}

fn derivative_matrix(dy: &[f64]) -> CMatrix {
    let mut m = maser_density(dy);
    m[(0, 0)] = C64::new(-dy[0] - dy[1], 0.0);
    m
}

/// Integrates the maser with RK4 and tracks the bound along the way.
///
/// The flux is accumulated from per-step increments `tr{(ρ(t+dt) − ρ(t)) ln ρ*}`.
/// In [`BoundMode::Incremental`] the bound follows the first-order tracker
/// update at every integrator step; in [`BoundMode::Resolve`] `α` and the
/// bound are solved exactly from the accumulated flux at each sample.
pub fn run_maser(params: &MaserParams, opts: &RunOptions) -> Result<Run<DensityMatrix>> {
    params.validate()?;
    opts.validate()?;
    let pot = maser_reference_state(params)?;
    let sys = maser_rhs(params);
    let y0 = params.initial_vector();
    let rho0 = validate_density(maser_density(&y0))?;
    let s0 = von_neumann_entropy(&rho0)?;
    let closed = ClosedFormBound::new(&rho0, &pot)?;
    let mut tracker = BoundTracker::start(&rho0, &pot)?;
    let sigma_a = tracker.sigma_a;

    let last = step_count(opts.t_max, opts.dt);
    let mut record = TrajectoryRecord::new();
    let mut states = Vec::new();
    let mut max_residual = 0.0_f64;
    let mut prev = maser_density(&y0);
    let mut dy = [0.0; 4];

    integrate(&sys, &y0, opts.t_max, opts.dt, |k, t, y| {
        let current = maser_density(y);
        if k > 0 {
            let delta_flux = pot.log_trace(&(&current - &prev));
            tracker = tracker.advance(&pot, t - tracker.t, delta_flux)?;
            tracker.t = t;
        }
        prev = current;
        if !opts.retained(k, last) {
            return Ok(());
        }
        let rho = validate_density(prev.clone())?;
        let flux = tracker.flux;
        let (bound, alpha) = match opts.mode {
            BoundMode::Incremental => (tracker.bound, tracker.alpha),
            BoundMode::Resolve => closed.evaluate(flux)?,
        };
        sys.rhs(t, y, &mut dy);
        let flux_rate = pot.log_trace(&derivative_matrix(&dy));
        let entropy = von_neumann_entropy(&rho)?;
        let sigma = entropy - s0 + flux;
        let target = closed.initial_potential() + flux;
        max_residual = max_residual.max((constraint_f(&pot, alpha) - target).abs());
        record.push(Sample::new(
            t, entropy, flux, flux_rate, alpha, sigma, bound,
        ))?;
        states.push(rho);
        Ok(())
    })?;

    Ok(Run {
        record,
        states,
        sigma_a,
        max_constraint_residual: max_residual,
    })
}
