//! Bosonic mode `H = ω(a†a + 1/2)` coupled to a broadband squeezed bath.
//!
//! Gaussian initial states stay Gaussian, so the run integrates the moment
//! equations
//!
//! ```text
//! d⟨a⟩/dt   = −(γ/2 + iω)⟨a⟩
//! d⟨a†a⟩/dt = −γ(⟨a†a⟩ − N)
//! d⟨aa⟩/dt  = −(γ + 2iω)⟨aa⟩ + M₀ e^{−2iω_s t}
//! ```
//!
//! with `N + 1/2 = (n̄ + 1/2)cosh 2r` and
//! `M_t = −(n̄ + 1/2) e^{i(θ − 2ω_s t)} sinh 2r`. The flux rate is measured
//! through the squeezed mode `b_z`: `φ = γωβ(⟨b_z†b_z⟩ − n̄)`, and the bound
//! uses the rate form `Σ_a + ∫(φ − αφ̇)dt`.

use log::warn;

use crate::dynamics::{grid_time, integrate, step_count, OdeSystem, Sample, TrajectoryRecord};
use crate::maxent::bound_rate_form_series;
use crate::models::gaussian::{gaussian_entropy, GaussianState};
use crate::models::{require, Run, RunOptions};
use crate::quantum::C64;
use crate::{Error, Result};

/// Occupations below this are clamped before computing `α`.
pub const OCCUPATION_FLOOR: f64 = 1e-12;
const NEGATIVE_OCCUPATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedParams {
    /// Mode frequency ω.
    pub omega: f64,
    /// Bath central frequency ω_s.
    pub omega_s: f64,
    /// Bath temperature T.
    pub temperature: f64,
    /// Coupling γ.
    pub gamma: f64,
    /// Squeeze magnitude r.
    pub r: f64,
    /// Squeeze phase θ.
    pub theta: f64,
    pub initial: GaussianState,
}

impl SqueezedParams {
    /// `ω/T = 2`, `ω_s/T = 1`, `r = 1`, `θ = 1`, `γ = 1`, starting from the
    /// squeezed vacuum `S(−r)|0⟩`.
    pub fn reference_example() -> Self {
        Self {
            omega: 2.0,
            omega_s: 1.0,
            temperature: 1.0,
            gamma: 1.0,
            r: 1.0,
            theta: 1.0,
            initial: GaussianState::squeezed_vacuum(-1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.omega > 0.0, || {
            format!("omega must be positive, got {}", self.omega)
        })?;
        require(self.omega_s.is_finite(), || "omega_s must be finite".into())?;
        require(self.temperature > 0.0, || {
            format!("temperature must be positive, got {}", self.temperature)
        })?;
        require(self.gamma > 0.0, || {
            format!("gamma must be positive, got {}", self.gamma)
        })?;
        require(self.r >= 0.0, || format!("r must be >= 0, got {}", self.r))?;
        require(self.theta.is_finite(), || "theta must be finite".into())?;
        require(self.initial.mean == C64::new(0.0, 0.0), || {
            "displaced initial states are not supported".into()
        })?;
        self.initial.validate()
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    /// Thermal occupation `n̄ = 1/(e^{ω/T} − 1)`.
    pub fn nbar(&self) -> f64 {
        1.0 / (self.omega / self.temperature).exp_m1()
    }

    /// `N = (n̄ + 1/2) cosh 2r − 1/2`.
    pub fn big_n(&self) -> f64 {
        (self.nbar() + 0.5) * (2.0 * self.r).cosh() - 0.5
    }

    /// `M_t = −(n̄ + 1/2) e^{i(θ − 2ω_s t)} sinh 2r`.
    pub fn m_coefficient(&self, t: f64) -> C64 {
        let phase = C64::new(0.0, self.theta - 2.0 * self.omega_s * t).exp();
        -phase * ((self.nbar() + 0.5) * (2.0 * self.r).sinh())
    }

    /// `γωβ`, the scale of `ln ρ*` in units of `b_z†b_z`.
    pub fn flux_scale(&self) -> f64 {
        self.gamma * self.omega * self.beta()
    }
}

/// Moment equations packed as `(Re⟨a⟩, Im⟨a⟩, ⟨a†a⟩, Re⟨aa⟩, Im⟨aa⟩)`.
#[derive(Debug, Clone, Copy)]
pub struct SqueezedSystem {
    params: SqueezedParams,
    big_n: f64,
    m0: C64,
}

impl OdeSystem for SqueezedSystem {
    fn dim(&self) -> usize {
        5
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let p = &self.params;
        let s = GaussianState::from_vector(y);
        let da = -C64::new(0.5 * p.gamma, p.omega) * s.mean;
        let dn = -p.gamma * (s.occupation - self.big_n);
        let drive = self.m0 * C64::new(0.0, -2.0 * p.omega_s * t).exp();
        let dm = -C64::new(p.gamma, 2.0 * p.omega) * s.anomalous + drive;
        dy[0] = da.re;
        dy[1] = da.im;
        dy[2] = dn;
        dy[3] = dm.re;
        dy[4] = dm.im;
    }
}

pub fn squeezed_rhs(params: &SqueezedParams) -> SqueezedSystem {
    SqueezedSystem {
        params: *params,
        big_n: params.big_n(),
        m0: params.m_coefficient(0.0),
    }
}

/// `⟨b_z†b_z⟩_t = ⟨a†a⟩ cosh 2r + sinh²r − Re[M_t* ⟨aa⟩ / (n̄ + 1/2)]`.
pub fn bz_occupation(state: &GaussianState, params: &SqueezedParams, t: f64) -> f64 {
    let m = params.m_coefficient(t);
    state.occupation * (2.0 * params.r).cosh() + params.r.sinh().powi(2)
        - (m.conj() * state.anomalous).re / (params.nbar() + 0.5)
}

/// `α = −ln((1 + nb)/nb) / (βωγ)`; always negative.
pub fn squeezed_alpha(nb: f64, params: &SqueezedParams) -> Result<f64> {
    if !(nb > 0.0) {
        return Err(Error::NonPositiveOccupation { value: nb });
    }
    Ok(-(1.0 / nb).ln_1p() / params.flux_scale())
}

/// Entropy of the `b_z`-thermal state with occupation `nb0`; equals `Σ_a`
/// for a pure initial state.
pub fn squeezed_sigma_a(nb0: f64) -> f64 {
    gaussian_entropy(nb0)
}

/// Integrates the moments and evaluates `Σ` and the rate-form bound.
///
/// `Φ` is the trapezoidal integral of `φ` on the integrator grid, `Σ̃` comes
/// from [`bound_rate_form_series`] on the same grid, and
/// `Σ = S(ρ(t)) − S(ρ(0)) + Φ` with the Gaussian entropy. For a mixed start
/// `Σ_a = S(σ(0)) − S(ρ(0))`.
pub fn run_squeezed(params: &SqueezedParams, opts: &RunOptions) -> Result<Run<GaussianState>> {
    params.validate()?;
    opts.validate()?;
    let sys = squeezed_rhs(params);
    let nbar = params.nbar();
    let scale = params.flux_scale();

    let n = step_count(opts.t_max, opts.dt);
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut phi = Vec::with_capacity(n + 1);
    let mut alpha = Vec::with_capacity(n + 1);
    let mut residuals = Vec::with_capacity(n + 1);
    let mut clamped = false;

    integrate(
        &sys,
        &params.initial.to_vector(),
        opts.t_max,
        opts.dt,
        |_, t, y| {
            let state = GaussianState::from_vector(y);
            state.validate()?;
            let nb = bz_occupation(&state, params, t);
            if nb < -NEGATIVE_OCCUPATION_TOL {
                return Err(Error::NonPositiveOccupation { value: nb });
            }
            let nb_eff = if nb < OCCUPATION_FLOOR {
                if !clamped {
                    warn!("b_z occupation {nb:e} at t = {t} clamped to {OCCUPATION_FLOOR:e}");
                    clamped = true;
                }
                OCCUPATION_FLOOR
            } else {
                nb
            };
            let a = squeezed_alpha(nb_eff, params)?;
            // occupation implied by α, compared with the measured one
            let implied = 1.0 / (-a * scale).exp_m1();
            residuals.push((implied - nb_eff).abs() / nb_eff.max(1.0));
            times.push(t);
            states.push(state);
            phi.push(scale * (nb - nbar));
            alpha.push(a);
            Ok(())
        },
    )?;

    let initial_nb = bz_occupation(&params.initial, params, 0.0).max(0.0);
    let s0 = params.initial.entropy()?;
    let sigma_a = squeezed_sigma_a(initial_nb) - s0;
    let bounds = bound_rate_form_series(sigma_a, &times, &phi, &alpha)?;

    let mut record = TrajectoryRecord::new();
    let mut kept = Vec::new();
    let mut flux = 0.0;
    let mut max_residual = 0.0_f64;
    for k in 0..times.len() {
        if k > 0 {
            flux += 0.5 * (times[k] - times[k - 1]) * (phi[k] + phi[k - 1]);
        }
        if !opts.retained(k, n) {
            continue;
        }
        let entropy = states[k].entropy()?;
        let sigma = entropy - s0 + flux;
        max_residual = max_residual.max(residuals[k]);
        record.push(Sample::new(
            times[k], entropy, flux, phi[k], alpha[k], sigma, bounds[k],
        ))?;
        kept.push(states[k]);
    }
    debug_assert_eq!(grid_time(n, n, opts.t_max, opts.dt), *times.last().unwrap());

    Ok(Run {
        record,
        states: kept,
        sigma_a,
        max_constraint_residual: max_residual,
    })
}
