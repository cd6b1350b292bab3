use entroflux_core::maxent::{finite_difference, ClosedFormBound};
use entroflux_core::models::{
    bz_occupation, gaussian_entropy, maser_reference_state, qubit_reference_state, run_maser,
    run_qubit, run_squeezed,
};
use entroflux_core::quantum::hermitian_eigen;
use entroflux_core::sampling::{random_density, random_potential};
use entroflux_core::{
    constraint_f, constraint_f_prime, eigendecompose, expectation_log_potential,
    flux_from_potential, relative_entropy, sigma_state, solve_alpha, von_neumann_entropy,
    BoundMode, MaserParams, QubitParams, RunOptions, SqueezedParams, C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn entropy_within_bounds(seed in any::<u64>(), dim in 2usize..=6) {
        let rho = random_density(&mut rng(seed), dim);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-9 && s <= (dim as f64).ln() + 1e-9);
    }

    #[test]
    fn relative_entropy_nonnegative(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, dim);
        let sigma = random_density(&mut r, dim);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn log_potential_matches_projection_oracle(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let pot = random_potential(&mut r, dim, 1e-3).unwrap();
        let rho = random_density(&mut r, dim);
        let basis = pot.basis();
        let oracle: f64 = (0..dim)
            .map(|i| {
                let v = basis.column(i);
                (v.adjoint() * rho.matrix() * v)[(0, 0)].re * pot.eigenvalues()[i].ln()
            })
            .sum();
        let value = expectation_log_potential(&rho, &pot).unwrap();
        prop_assert!((value - oracle).abs() <= 1e-10);
        let (lo, hi) = pot.log_range();
        prop_assert!(value >= lo - 1e-12 && value <= hi + 1e-12);
    }

    #[test]
    fn constraint_is_monotone(seed in any::<u64>(), dim in 2usize..=6, a in -30.0..30.0f64, da in 0.0..5.0f64) {
        let pot = random_potential(&mut rng(seed), dim, 1e-3).unwrap();
        // saturated tails are flat up to rounding
        prop_assert!(constraint_f(&pot, a) <= constraint_f(&pot, a + da) + 1e-13);
        let (lo, hi) = pot.log_range();
        let f = constraint_f(&pot, a);
        prop_assert!(f >= lo - 1e-13 && f <= hi + 1e-13);
    }

    #[test]
    fn constraint_is_strictly_increasing_near_zero(seed in any::<u64>(), dim in 2usize..=6, a in -3.0..3.0f64, da in 1e-3..1.0f64) {
        let pot = random_potential(&mut rng(seed), dim, 1e-3).unwrap();
        prop_assert!(constraint_f(&pot, a) < constraint_f(&pot, a + da));
        prop_assert!(constraint_f_prime(&pot, a) > 0.0);
        let (lo, hi) = pot.log_range();
        let f = constraint_f(&pot, a);
        prop_assert!(f > lo && f < hi);
    }

    #[test]
    fn solver_residual(seed in any::<u64>(), dim in 2usize..=6, frac in 1e-6..(1.0 - 1e-6)) {
        let pot = random_potential(&mut rng(seed), dim, 1e-3).unwrap();
        let (lo, hi) = pot.log_range();
        let target = lo + frac * (hi - lo);
        let alpha = solve_alpha(&pot, target).unwrap();
        prop_assert!((constraint_f(&pot, alpha) - target).abs() <= 1e-10);
    }

    /// Σ̃ − Σ = D(ρ(t)‖σ(α(t))) for any later state reachable under the
    /// constraint, not only along model trajectories.
    #[test]
    fn gap_identity_for_arbitrary_states(seed in any::<u64>(), dim in 2usize..=5) {
        let mut r = rng(seed);
        let pot = random_potential(&mut r, dim, 1e-3).unwrap();
        let rho0 = random_density(&mut r, dim);
        let rho_t = random_density(&mut r, dim);
        let flux = flux_from_potential(&rho_t, &rho0, &pot).unwrap();
        let (bound, alpha) = ClosedFormBound::new(&rho0, &pot).unwrap().evaluate(flux).unwrap();
        let sigma = von_neumann_entropy(&rho_t).unwrap() - von_neumann_entropy(&rho0).unwrap() + flux;
        let d = relative_entropy(&rho_t, &sigma_state(&pot, alpha)).unwrap();
        prop_assert!(((bound - sigma) - d).abs() <= 1e-8);
        prop_assert!(sigma <= bound + 1e-10);
    }
}

#[test]
fn eigendecomposition_round_trip() {
    let mut r = rng(99);
    for case in 0..1000 {
        let dim = 2 + case % 5;
        let rho = random_density(&mut r, dim);
        let spec = eigendecompose(&rho).unwrap();
        let err = (spec.reconstruct() - rho.matrix()).norm();
        assert!(err <= 1e-9, "reconstruction error {err}");
        let gram = spec.eigenvectors.adjoint() * &spec.eigenvectors;
        let ortho = (gram - nalgebra::DMatrix::<C64>::identity(dim, dim)).norm();
        assert!(ortho <= 1e-10);
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
    // non-density Hermitian input also round-trips
    let h = hermitian_eigen(&random_density(&mut r, 4).matrix().map(|z| z * 3.0)).unwrap();
    assert!(h.eigenvalues.iter().sum::<f64>() - 3.0 < 1e-12);
}

#[test]
fn maser_conserves_trace_and_positivity() {
    let run = run_maser(
        &MaserParams::reference_example(),
        &RunOptions::new(10.0, 1e-3).sample_every(1),
    )
    .unwrap();
    for rho in &run.states {
        let m = rho.matrix();
        let pops = [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re];
        assert!(pops.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!((pops.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn maser_coherence_decays_exponentially() {
    let p = MaserParams::reference_example();
    let run = run_maser(&p, &RunOptions::new(5.0, 1e-3)).unwrap();
    for (s, rho) in run.record.samples().iter().zip(&run.states) {
        let c = rho.matrix()[(1, 2)].norm();
        let expected = p.c0.norm() * (-p.gamma_d * s.t).exp();
        assert!(
            (c - expected).abs() <= 1e-12,
            "t = {}: {c} vs {expected}",
            s.t
        );
    }
}

#[test]
fn gap_is_relative_entropy_along_qubit_and_maser() {
    let qubit = QubitParams {
        delta: 1.0,
        beta: 1.0,
        gamma: 1.0,
        p0: 0.3,
        c0: C64::new(0.1, 0.05),
    };
    let run = run_qubit(&qubit, &RunOptions::new(8.0, 1e-3)).unwrap();
    let pot = qubit_reference_state(&qubit).unwrap();
    for (s, rho) in run.record.samples().iter().zip(&run.states) {
        let d = relative_entropy(rho, &sigma_state(&pot, s.alpha)).unwrap();
        assert!((s.gap - d).abs() <= 1e-8);
        assert!(s.gap >= -1e-9);
    }

    let maser = MaserParams::reference_example();
    let opts = RunOptions::new(10.0, 1e-3).mode(BoundMode::Resolve);
    let run = run_maser(&maser, &opts).unwrap();
    let pot = maser_reference_state(&maser).unwrap();
    for (s, rho) in run.record.samples().iter().zip(&run.states) {
        let d = relative_entropy(rho, &sigma_state(&pot, s.alpha)).unwrap();
        assert!((s.gap - d).abs() <= 1e-8);
    }
    let incremental = run_maser(&maser, &RunOptions::new(10.0, 1e-3)).unwrap();
    assert!(incremental.record.max_negative_gap() <= 1e-8);
}

#[test]
fn squeezed_moments_stay_physical() {
    let p = SqueezedParams::reference_example();
    let run = run_squeezed(&p, &RunOptions::new(6.0, 1e-3).sample_every(1)).unwrap();
    for s in &run.states {
        let bound = (s.occupation * (s.occupation + 1.0)).sqrt() + 1e-9;
        assert!(s.anomalous.norm() <= bound);
    }
    assert!(run.record.max_negative_gap() <= 1e-6);
}

#[test]
fn squeezed_rate_form_matches_entropy_identity() {
    // Σ̃ − Σ_a − Φ = −∫αφ̇ dt, which for the b_z-thermal comparison state is
    // S_th(nb(t)) − S_th(nb(0)); the discrete forms agree to discretization error.
    let p = SqueezedParams::reference_example();
    let worst = |dt: f64| {
        let run = run_squeezed(&p, &RunOptions::new(6.0, dt)).unwrap();
        let nb0 = bz_occupation(&run.states[0], &p, 0.0);
        let mut worst = 0.0_f64;
        for (s, state) in run.record.samples().iter().zip(&run.states) {
            let nb = bz_occupation(state, &p, s.t);
            let identity = run.sigma_a + s.flux + gaussian_entropy(nb) - gaussian_entropy(nb0);
            worst = worst.max((identity - s.sigma_bound).abs());
        }
        worst
    };
    let coarse = worst(2e-3);
    let fine = worst(1e-3);
    assert!(fine <= 5e-6, "{fine}");
    assert!(fine < 0.6 * coarse, "{coarse} -> {fine}");
}

#[test]
fn squeezed_rate_form_dual_evaluation() {
    // Σ_a + Φ − ∫αφ̇ (accumulated separately) equals the running rate form.
    let p = SqueezedParams::reference_example();
    let run = run_squeezed(&p, &RunOptions::new(6.0, 1e-3).sample_every(1)).unwrap();
    let times = run.record.column(|s| s.t);
    let phi = run.record.column(|s| s.flux_rate);
    let alpha = run.record.column(|s| s.alpha);
    let phi_dot = finite_difference(&times, &phi);
    let mut correction = 0.0;
    for k in 1..times.len() {
        correction -= 0.5
            * (times[k] - times[k - 1])
            * (alpha[k] * phi_dot[k] + alpha[k - 1] * phi_dot[k - 1]);
        if k == times.len() / 2 || k == times.len() - 1 {
            let s = &run.record.samples()[k];
            assert!((run.sigma_a + s.flux + correction - s.sigma_bound).abs() <= 1e-6);
        }
    }
}

#[test]
fn squeezed_steady_state_flux_rate() {
    // The steady flux rate does not vanish: the bath keeps pumping entropy.
    let p = SqueezedParams::reference_example();
    let run = run_squeezed(&p, &RunOptions::new(30.0, 1e-3)).unwrap();
    let phi_end = run.record.last().unwrap().flux_rate;
    let m0 = p.m_coefficient(0.0);
    let detuning = C64::new(p.gamma, 2.0 * (p.omega - p.omega_s));
    let nb_ss = p.big_n() * (2.0 * p.r).cosh() + p.r.sinh().powi(2)
        - m0.norm_sqr() / (p.nbar() + 0.5) * (C64::new(1.0, 0.0) / detuning).re;
    let expected = p.flux_scale() * (nb_ss - p.nbar());
    assert!((phi_end - expected).abs() < 1e-8, "{phi_end} vs {expected}");
    assert!(expected > 0.1);
}

#[test]
fn thinning_is_output_only() {
    let p = MaserParams::reference_example();
    let dense = run_maser(&p, &RunOptions::new(2.0, 1e-3).sample_every(1)).unwrap();
    let sparse = run_maser(&p, &RunOptions::new(2.0, 1e-3).sample_every(7)).unwrap();
    for s in sparse.record.samples() {
        let m = dense.record.samples().iter().find(|d| d.t == s.t).unwrap();
        assert_eq!(m, s);
    }
    let p = SqueezedParams::reference_example();
    let dense = run_squeezed(&p, &RunOptions::new(2.0, 1e-3).sample_every(1)).unwrap();
    let sparse = run_squeezed(&p, &RunOptions::new(2.0, 1e-3).sample_every(13)).unwrap();
    for s in sparse.record.samples() {
        let m = dense.record.samples().iter().find(|d| d.t == s.t).unwrap();
        assert_eq!(m, s);
    }
}

#[test]
fn runs_are_deterministic() {
    let p = MaserParams::reference_example();
    let a = run_maser(&p, &RunOptions::new(3.0, 1e-3)).unwrap();
    let b = run_maser(&p, &RunOptions::new(3.0, 1e-3)).unwrap();
    assert_eq!(a.record, b.record);
}

#[test]
fn squeezed_unsqueezed_thermal_start_stays_at_zero() {
    let p = SqueezedParams {
        r: 0.0,
        initial: entroflux_core::GaussianState::thermal(1.0 / (2f64.exp() - 1.0)),
        ..SqueezedParams::reference_example()
    };
    let run = run_squeezed(&p, &RunOptions::new(5.0, 1e-3)).unwrap();
    let last = run.record.last().unwrap();
    assert!(last.sigma.abs() < 1e-12 && last.sigma_bound.abs() < 1e-12);
}

#[test]
fn coherent_qubit_state_is_valid() {
    let m = entroflux_core::CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.7, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.3, 0.0),
        ],
    );
    assert!(entroflux_core::validate_density(m).is_ok());
}
