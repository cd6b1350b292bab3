//! Two-level system relaxing in contact with a thermal bath, solved in
//! closed form: `p(t) = (p₀ − p_∞)e^{−γt} + p_∞`, `c(t) = c₀ e^{−iΔt − γt/2}`.

use crate::dynamics::{grid_time, step_count, Sample, TrajectoryRecord};
use crate::maxent::{constraint_f, ReferencePotential};
use crate::models::{require, Run, RunOptions};
use crate::quantum::{
    expectation_log_potential, validate_density, von_neumann_entropy, CMatrix, DensityMatrix, C64,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    /// Level splitting Δ.
    pub delta: f64,
    pub beta: f64,
    /// Damping rate γ.
    pub gamma: f64,
    /// Initial excited-state population.
    pub p0: f64,
    /// Initial coherence.
    pub c0: C64,
}

impl QubitParams {
    pub fn validate(&self) -> Result<()> {
        require(self.delta > 0.0, || {
            format!("delta must be positive, got {}", self.delta)
        })?;
        require(self.beta > 0.0, || {
            format!("beta must be positive, got {}", self.beta)
        })?;
        require(self.gamma > 0.0, || {
            format!("gamma must be positive, got {}", self.gamma)
        })?;
        require(self.p0 > 0.0 && self.p0 < 1.0, || {
            format!("p0 must lie in (0, 1), got {}", self.p0)
        })?;
        require(self.c0.norm_sqr() <= self.p0 * (1.0 - self.p0), || {
            format!("|c0|^2 = {} exceeds p0(1 - p0)", self.c0.norm_sqr())
        })?;
        validate_density(density(self.p0, self.c0)).map(drop)
    }

    pub fn beta_delta(&self) -> f64 {
        self.beta * self.delta
    }

    /// Thermal excited-state population `e^{−βΔ}/(1 + e^{−βΔ})`.
    pub fn p_inf(&self) -> f64 {
        let w = (-self.beta_delta()).exp();
        w / (1.0 + w)
    }

    pub fn population(&self, t: f64) -> f64 {
        (self.p0 - self.p_inf()) * (-self.gamma * t).exp() + self.p_inf()
    }

    pub fn coherence(&self, t: f64) -> C64 {
        self.c0 * C64::new(-0.5 * self.gamma * t, -self.delta * t).exp()
    }
}

fn density(p: f64, c: C64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(1.0 - p, 0.0), c, c.conj(), C64::new(p, 0.0)],
    )
}

/// `ρ(t) = [[1 − p(t), c(t)], [c(t)*, p(t)]]` in the energy eigenbasis.
pub fn qubit_state(params: &QubitParams, t: f64) -> Result<DensityMatrix> {
    validate_density(density(params.population(t), params.coherence(t)))
}

/// `ρ* = C(|0⟩⟨0| + e^{−βΔ}|1⟩⟨1|)`.
pub fn qubit_reference_state(params: &QubitParams) -> Result<ReferencePotential> {
    ReferencePotential::from_weights(&[1.0, (-params.beta_delta()).exp()])
}

/// `α(t) = (2/βΔ) atanh(1 − 2p(t))`.
pub fn qubit_alpha(params: &QubitParams, t: f64) -> f64 {
    2.0 / params.beta_delta() * (1.0 - 2.0 * params.population(t)).atanh()
}

/// Coherence cost `Σ_a = H(p₀) + λ₊ ln λ₊ + λ₋ ln λ₋`, with
/// `λ± = 1/2 ± √((p₀ − 1/2)² + |c₀|²)`.
pub fn qubit_sigma_a(params: &QubitParams) -> f64 {
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let p = params.p0;
    let r = ((p - 0.5).powi(2) + params.c0.norm_sqr()).sqrt();
    -xlnx(p) - xlnx(1.0 - p) + xlnx(0.5 + r) + xlnx(0.5 - r)
}

/// Samples `Σ` from its definition and `Σ̃` from the qubit's closed-form
/// bound `Σ_a + γβΔ(p₀ − p_∞) ∫ (1 − α) e^{−γt} dt`, the integral taken by
/// the trapezoidal rule on the integrator grid.
pub fn run_qubit(params: &QubitParams, opts: &RunOptions) -> Result<Run<DensityMatrix>> {
    params.validate()?;
    opts.validate()?;
    let pot = qubit_reference_state(params)?;
    let rho0 = qubit_state(params, 0.0)?;
    let s0 = von_neumann_entropy(&rho0)?;
    let sigma_a = qubit_sigma_a(params);
    let bd = params.beta_delta();
    let prefactor = params.gamma * bd * (params.p0 - params.p_inf());
    let integrand = |t: f64| (1.0 - qubit_alpha(params, t)) * (-params.gamma * t).exp();

    let n = step_count(opts.t_max, opts.dt);
    let mut record = TrajectoryRecord::new();
    let mut states = Vec::new();
    let mut max_residual = 0.0_f64;
    let mut integral = 0.0;
    let mut prev = (0.0, integrand(0.0));
    for k in 0..=n {
        let t = grid_time(k, n, opts.t_max, opts.dt);
        let h = integrand(t);
        if k > 0 {
            integral += 0.5 * (t - prev.0) * (h + prev.1);
            prev = (t, h);
        }
        if !opts.retained(k, n) {
            continue;
        }
        let rho = qubit_state(params, t)?;
        let alpha = qubit_alpha(params, t);
        let flux = -bd * (params.population(t) - params.p0);
        let flux_rate = prefactor * (-params.gamma * t).exp();
        let entropy = von_neumann_entropy(&rho)?;
        let sigma = entropy - s0 + flux;
        let bound = sigma_a + prefactor * integral;
        let residual = (constraint_f(&pot, alpha) - expectation_log_potential(&rho, &pot)?).abs();
        max_residual = max_residual.max(residual);
        record.push(Sample::new(
            t, entropy, flux, flux_rate, alpha, sigma, bound,
        ))?;
        states.push(rho);
    }
    Ok(Run {
        record,
        states,
        sigma_a,
        max_constraint_residual: max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxent::solve_alpha;

    fn params(p0: f64, c0: f64) -> QubitParams {
        QubitParams {
            delta: 1.0,
            beta: 1.0,
            gamma: 1.0,
            p0,
            c0: C64::new(c0, 0.0),
        }
    }

    #[test]
    fn state_at_zero_and_infinity() {
        let q = params(0.3, 0.1);
        let rho = qubit_state(&q, 0.0).unwrap();
        assert!((rho.matrix()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!((rho.matrix()[(0, 1)].re - 0.1).abs() < 1e-15);

        let late = qubit_state(&q, 50.0).unwrap();
        assert!((late.matrix()[(1, 1)].re - q.p_inf()).abs() < 1e-9);
        assert!(late.matrix()[(0, 1)].norm() < 1e-9);
    }

    #[test]
    fn population_formula() {
        let q = params(0.3, 0.1);
        let p_inf = (-1f64).exp() / (1.0 + (-1f64).exp());
        assert!((p_inf - 0.2689).abs() < 1e-4);
        let expected = (0.3 - p_inf) * (-1f64).exp() + p_inf;
        assert!((q.population(1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn reference_state_values() {
        let p = qubit_reference_state(&params(0.3, 0.0)).unwrap();
        assert!((p.eigenvalues()[0] - 0.7311).abs() < 1e-4);
        assert!((p.eigenvalues()[1] - 0.2689).abs() < 1e-4);

        let q2 = QubitParams {
            beta: 2.0,
            ..params(0.3, 0.0)
        };
        let p = qubit_reference_state(&q2).unwrap();
        assert!((p.eigenvalues()[0] - 0.8808).abs() < 1e-4);
        assert!((p.eigenvalues()[1] - 0.1192).abs() < 1e-4);

        let flat = QubitParams {
            beta: 1e-14,
            ..params(0.3, 0.0)
        };
        assert!(matches!(
            qubit_reference_state(&flat),
            Err(crate::Error::DegenerateSpectrum(_))
        ));
    }

    #[test]
    fn alpha_from_tanh_relation() {
        let q = params(q_thermal(), 0.0);
        assert!((qubit_alpha(&q, 0.0) - 1.0).abs() < 1e-12);
        assert!(qubit_alpha(&params(0.5, 0.0), 0.0).abs() < 1e-15);
        assert!((qubit_alpha(&params(0.3, 0.0), 0.0) - 2.0 * 0.4_f64.atanh()).abs() < 1e-14);

        let q = params(0.3, 0.1);
        let pot = qubit_reference_state(&q).unwrap();
        for t in [0.0, 0.5, 2.0, 5.0] {
            let rho = qubit_state(&q, t).unwrap();
            let generic =
                solve_alpha(&pot, expectation_log_potential(&rho, &pot).unwrap()).unwrap();
            assert!((generic - qubit_alpha(&q, t)).abs() < 1e-9);
        }
    }

    fn q_thermal() -> f64 {
        params(0.3, 0.0).p_inf()
    }

    #[test]
    fn equilibrium_start_is_inert() {
        let run = run_qubit(&params(q_thermal(), 0.0), &RunOptions::new(5.0, 1e-3)).unwrap();
        for s in run.record.samples() {
            assert!(s.sigma.abs() < 1e-12 && s.sigma_bound.abs() < 1e-12);
        }
    }

    #[test]
    fn maximal_start_has_zero_initial_gap() {
        let run = run_qubit(&params(0.4, 0.0), &RunOptions::new(4.0, 1e-3)).unwrap();
        assert!(run.record.first().unwrap().gap.abs() < 1e-12);
        assert!(run.record.max_negative_gap() < 1e-9);
    }

    #[test]
    fn coherent_start_gap_decays() {
        let run = run_qubit(&params(0.3, 0.1), &RunOptions::new(8.0, 1e-3)).unwrap();
        let gaps = run.record.column(|s| s.gap);
        assert!((gaps[0] - 0.0214).abs() < 1e-4);
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(*gaps.last().unwrap() < 1e-4);
        assert!(run.record.max_negative_gap() < 1e-9);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(params(0.3, 0.5).validate().is_err());
        assert!(params(1.2, 0.0).validate().is_err());
        assert!(QubitParams {
            gamma: 0.0,
            ..params(0.3, 0.0)
        }
        .validate()
        .is_err());
    }
}
