//! Invariant groups run by `entroflux check`.

use std::time::Instant;

use entroflux_core::models::{
    gaussian_entropy, gaussian_occupation_u, maser_reference_state, qubit_alpha,
    qubit_reference_state, qubit_state, run_maser, run_qubit, run_squeezed,
};
use entroflux_core::sampling::{random_density, random_potential};
use entroflux_core::{
    adiabatic_entropy_production, bound_closed_form, constraint_f, eigendecompose,
    flux_from_potential, integrate, relative_entropy, sigma_state, solve_alpha,
    von_neumann_entropy, BoundMode, FnSystem, MaserParams, QubitParams, Result, RunOptions,
    SqueezedParams, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Symplectic eigenvalue offset `u(n, |m|²)` of a single-mode Gaussian state.
pub type OccupationFn = fn(f64, f64) -> Result<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl GroupResult {
    fn new(name: &'static str, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((passed, detail)) => Self {
                name,
                passed,
                detail,
            },
            Err(e) => Self {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckSuite {
    pub seed: u64,
    pub occupation_u: OccupationFn,
}

impl Default for CheckSuite {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            occupation_u: gaussian_occupation_u,
        }
    }
}

impl CheckSuite {
    pub fn with_occupation_fn(self, occupation_u: OccupationFn) -> Self {
        Self {
            occupation_u,
            ..self
        }
    }

    pub fn run(&self) -> Vec<GroupResult> {
        vec![
            GroupResult::new("density matrices", self.density_matrices()),
            GroupResult::new("alpha solver", self.alpha_solver()),
            GroupResult::new("bound identity", self.bound_identity()),
            GroupResult::new("integrator", integrator_order()),
            GroupResult::new("gaussian entropy", self.gaussian_entropy()),
            GroupResult::new("qubit model", qubit_model()),
            GroupResult::new("maser model", maser_model()),
            GroupResult::new("squeezed model", squeezed_model()),
        ]
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn density_matrices(&self) -> Result<(bool, String)> {
        let mut rng = self.rng(1);
        let (mut worst_rebuild, mut worst_entropy, mut worst_rel) = (0.0_f64, 0.0_f64, 0.0_f64);
        for case in 0..500 {
            let dim = 2 + case % 5;
            let rho = random_density(&mut rng, dim);
            let sigma = random_density(&mut rng, dim);
            let spec = eigendecompose(&rho)?;
            worst_rebuild = worst_rebuild.max((spec.reconstruct() - rho.matrix()).norm());
            let s = von_neumann_entropy(&rho)?;
            let ln_d = (dim as f64).ln();
            worst_entropy = worst_entropy.max(-s).max(s - ln_d);
            worst_rel = worst_rel
                .max(-relative_entropy(&rho, &sigma)?)
                .max(relative_entropy(&rho, &rho)?.abs());
        }
        Ok((
            worst_rebuild <= 1e-9 && worst_entropy <= 1e-10 && worst_rel <= 1e-10,
            format!(
                "rebuild {worst_rebuild:.1e}, entropy range {worst_entropy:.1e}, relative entropy {worst_rel:.1e}"
            ),
        ))
    }

    fn alpha_solver(&self) -> Result<(bool, String)> {
        let mut rng = self.rng(2);
        let mut cases = Vec::with_capacity(1000);
        for k in 0..1000 {
            let pot = random_potential(&mut rng, 2 + k % 5, 1e-3)?;
            let (lo, hi) = pot.log_range();
            let target = lo + rng.random_range(1e-6..1.0 - 1e-6) * (hi - lo);
            cases.push((pot, target));
        }
        let start = Instant::now();
        let mut worst = 0.0_f64;
        for (pot, target) in &cases {
            let alpha = solve_alpha(pot, *target)?;
            worst = worst.max((constraint_f(pot, alpha) - target).abs());
        }
        let elapsed = start.elapsed().as_secs_f64();
        let mut anchor = 0.0_f64;
        for (pot, _) in cases.iter().take(100) {
            let p = pot.eigenvalues();
            let neg_entropy: f64 = p.iter().map(|x| x * x.ln()).sum();
            let mean_log = p.iter().map(|x| x.ln()).sum::<f64>() / p.len() as f64;
            anchor = anchor
                .max((solve_alpha(pot, neg_entropy)? - 1.0).abs())
                .max(solve_alpha(pot, mean_log)?.abs());
        }
        Ok((
            worst <= 1e-10 && anchor <= 1e-10 && elapsed < 1.0,
            format!("1000 cases, residual {worst:.1e}, anchors {anchor:.1e}, {elapsed:.3}s"),
        ))
    }

    fn bound_identity(&self) -> Result<(bool, String)> {
        let mut rng = self.rng(3);
        let mut min_sigma_a = f64::INFINITY;
        let mut worst_gap = 0.0_f64;
        for case in 0..1000 {
            let dim = 2 + case % 4;
            let pot = random_potential(&mut rng, dim, 1e-3)?;
            let rho0 = random_density(&mut rng, dim);
            let (sigma_a, _) = adiabatic_entropy_production(&rho0, &pot)?;
            min_sigma_a = min_sigma_a.min(sigma_a);
            if case % 5 == 0 {
                let rho_t = random_density(&mut rng, dim);
                let flux = flux_from_potential(&rho_t, &rho0, &pot)?;
                let (bound, alpha) = bound_closed_form(&rho0, &pot, flux)?;
                let sigma = von_neumann_entropy(&rho_t)? - von_neumann_entropy(&rho0)? + flux;
                let d = relative_entropy(&rho_t, &sigma_state(&pot, alpha))?;
                worst_gap = worst_gap.max(((bound - sigma) - d).abs());
            }
        }
        Ok((
            min_sigma_a >= -1e-10 && worst_gap <= 1e-8,
            format!(
                "min coherence cost {min_sigma_a:.2e}, gap vs relative entropy {worst_gap:.1e}"
            ),
        ))
    }

    fn gaussian_entropy(&self) -> Result<(bool, String)> {
        let u_of = self.occupation_u;
        let mut pure = 0.0_f64;
        for k in 0..=20 {
            let r = 0.1 * k as f64;
            let n = r.sinh().powi(2);
            let m_abs2 = (r.sinh() * r.cosh()).powi(2);
            let u = u_of(n, m_abs2)?;
            pure = if u.is_finite() {
                pure.max(u.abs())
            } else {
                f64::INFINITY
            };
        }
        let quadratic = (u_of(1.0, 0.5)? - 0.5 * (7f64.sqrt() - 1.0)).abs();
        let thermal = (u_of(0.7, 0.0)? - 0.7).abs();
        let entropy = (gaussian_entropy(0.5) - (1.5 * 1.5f64.ln() - 0.5 * 0.5f64.ln())).abs();
        Ok((
            pure <= 1e-12 && quadratic <= 1e-12 && thermal <= 1e-12 && entropy <= 1e-14,
            format!("pure squeezed u {pure:.1e}, quadratic {quadratic:.1e}, thermal {thermal:.1e}"),
        ))
    }
}

fn integrator_order() -> Result<(bool, String)> {
    let sys = FnSystem::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0]);
    let err = |dt: f64| -> Result<f64> {
        let y = integrate(&sys, &[1.0], 1.0, dt, |_, _, _| Ok(()))?;
        Ok((y[0] - (-1f64).exp()).abs())
    };
    let order = (err(0.1)? / err(0.05)?).log2();
    Ok((
        (3.8..=4.2).contains(&order),
        format!("RK4 order {order:.3}"),
    ))
}

fn qubit_model() -> Result<(bool, String)> {
    let params = QubitParams {
        delta: 1.0,
        beta: 1.0,
        gamma: 1.0,
        p0: 0.3,
        c0: C64::new(0.1, 0.0),
    };
    let run = run_qubit(&params, &RunOptions::new(8.0, 1e-3))?;
    let pot = qubit_reference_state(&params)?;
    let rho0 = qubit_state(&params, 0.0)?;
    let mut worst = 0.0_f64;
    for s in run.record.samples() {
        let (bound, alpha) = bound_closed_form(&rho0, &pot, s.flux)?;
        worst = worst
            .max((bound - s.sigma_bound).abs())
            .max((alpha - qubit_alpha(&params, s.t)).abs());
    }
    let negative = run.record.max_negative_gap();
    Ok((
        worst <= 1e-9 && negative <= 1e-9,
        format!("closed form vs generic {worst:.1e}, negative gap {negative:.1e}"),
    ))
}

fn maser_model() -> Result<(bool, String)> {
    let params = MaserParams::reference_example();
    let pot = maser_reference_state(&params)?;
    let run = run_maser(
        &params,
        &RunOptions::new(10.0, 1e-3).mode(BoundMode::Resolve),
    )?;
    let mut identity = 0.0_f64;
    let mut trace = 0.0_f64;
    for (s, rho) in run.record.samples().iter().zip(&run.states) {
        let d = relative_entropy(rho, &sigma_state(&pot, s.alpha))?;
        identity = identity.max((s.gap - d).abs());
        trace = trace.max((rho.matrix().trace().re - 1.0).abs());
    }
    let negative = run.record.max_negative_gap();
    let still = run_maser(&params.at_fixed_point(), &RunOptions::new(10.0, 1e-3))?;
    let drift = still
        .record
        .samples()
        .iter()
        .map(|s| s.sigma.abs().max(s.sigma_bound.abs()).max(s.flux.abs()))
        .fold(0.0, f64::max);
    Ok((
        identity <= 1e-8 && negative <= 1e-8 && trace <= 1e-9 && drift <= 1e-9,
        format!(
            "gap vs relative entropy {identity:.1e}, negative gap {negative:.1e}, trace {trace:.1e}, fixed point {drift:.1e}"
        ),
    ))
}

fn squeezed_model() -> Result<(bool, String)> {
    let run = run_squeezed(
        &SqueezedParams::reference_example(),
        &RunOptions::new(6.0, 1e-3),
    )?;
    let negative = run.record.max_negative_gap();
    let samples = run.record.samples();
    let gap0 = samples[0].gap;
    let mid = samples
        .iter()
        .min_by(|a, b| (a.t - 3.0).abs().total_cmp(&(b.t - 3.0).abs()))
        .map_or(f64::NAN, |s| s.gap);
    let end = samples[samples.len() - 1].gap;
    Ok((
        negative <= 1e-6 && (gap0 - run.sigma_a).abs() <= 1e-10 && gap0 > 0.0 && end > 0.5 * mid,
        format!("negative gap {negative:.1e}, gap(0) {gap0:.4}, gap(3) {mid:.4}, gap(6) {end:.4}"),
    ))
}
