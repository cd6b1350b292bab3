//! Fixed-step RK4 and the sampled trajectory record shared by every model.
//!
//! Complex ODE variables are packed as (re, im) pairs so the integrator
//! stays real-valued.

use crate::{Error, Result};

/// A real ODE system `ẏ = F(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    /// Writes `F(t, y)` into `dy` (both of length [`OdeSystem::dim`]).
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Adapts a closure into an [`OdeSystem`].
pub struct FnSystem<F> {
    dim: usize,
    f: F,
}

impl<F> FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> OdeSystem for FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

impl<S: OdeSystem + ?Sized> OdeSystem for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (**self).rhs(t, y, dy)
    }
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    state: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParams(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let n = sys.dim();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: state.len(),
        });
    }
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    sys.rhs(t, state, &mut k1);
    for i in 0..n {
        tmp[i] = state[i] + 0.5 * dt * k1[i];
    }
    sys.rhs(t + 0.5 * dt, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = state[i] + 0.5 * dt * k2[i];
    }
    sys.rhs(t + 0.5 * dt, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = state[i] + dt * k3[i];
    }
    sys.rhs(t + dt, &tmp, &mut k4);

    let next: Vec<f64> = (0..n)
        .map(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if next.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteState { t: t + dt });
    }
    Ok(next)
}

/// Number of steps covering `[0, t_max]`; the last one may be shortened.
pub fn step_count(t_max: f64, dt: f64) -> usize {
    ((t_max / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Time of step `k` out of `n` on the grid `k·dt`, ending exactly at `t_max`.
pub fn grid_time(k: usize, n: usize, t_max: f64, dt: f64) -> f64 {
    if k >= n {
        t_max
    } else {
        k as f64 * dt
    }
}

/// Integrates from `t = 0` to `t_max`. The observer sees the initial state
/// and the state after every step (with its step index); an observer error
/// aborts the integration.
pub fn integrate<S, O>(
    sys: &S,
    state0: &[f64],
    t_max: f64,
    dt: f64,
    mut observer: O,
) -> Result<Vec<f64>>
where
    S: OdeSystem + ?Sized,
    O: FnMut(usize, f64, &[f64]) -> Result<()>,
{
    if !(t_max > 0.0) || !(dt > 0.0) || dt > t_max {
        return Err(Error::InvalidParams(format!(
            "need 0 < dt <= t_max, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let n = step_count(t_max, dt);
    let mut state = state0.to_vec();
    observer(0, 0.0, &state)?;
    for k in 0..n {
        let t = grid_time(k, n, t_max, dt);
        let t_next = grid_time(k + 1, n, t_max, dt);
        state = rk4_step(sys, t, &state, t_next - t)?;
        observer(k + 1, t_next, &state)?;
    }
    Ok(state)
}

/// One retained sample of a trajectory. All entropies in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// `S(ρ(t))`
    pub entropy: f64,
    /// `Φ(t)`
    pub flux: f64,
    /// `φ(t) = dΦ/dt`
    pub flux_rate: f64,
    pub alpha: f64,
    /// Actual entropy production `Σ(t)`.
    pub sigma: f64,
    /// Upper bound `Σ̃(t)`.
    pub sigma_bound: f64,
    /// `Σ̃ − Σ`
    pub gap: f64,
}

impl Sample {
    pub fn new(
        t: f64,
        entropy: f64,
        flux: f64,
        flux_rate: f64,
        alpha: f64,
        sigma: f64,
        sigma_bound: f64,
    ) -> Self {
        Self {
            t,
            entropy,
            flux,
            flux_rate,
            alpha,
            sigma,
            sigma_bound,
            gap: sigma_bound - sigma,
        }
    }
}

/// Time series of [`Sample`]s with strictly increasing `t`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryRecord {
    samples: Vec<Sample>,
}

impl TrajectoryRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(sample.t > last.t) {
                return Err(Error::NonMonotoneTime {
                    index: self.samples.len(),
                });
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<&Sample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn column(&self, f: impl Fn(&Sample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    /// `max(0, −min gap)`: how far the bound dips below the production.
    pub fn max_negative_gap(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |worst, s| if -s.gap > worst { -s.gap } else { worst })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay() -> FnSystem<impl Fn(f64, &[f64], &mut [f64])> {
        FnSystem::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0])
    }

    #[test]
    fn zero_rhs_leaves_state() {
        let sys = FnSystem::new(3, |_t, _y: &[f64], dy: &mut [f64]| dy.fill(0.0));
        let y = rk4_step(&sys, 0.0, &[1.0, -2.0, 3.5], 0.1).unwrap();
        assert_eq!(y, vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn single_step_matches_taylor_truncation() {
        // RK4 on ẋ = −x reproduces the 4th-order Taylor polynomial of e^{-h}.
        let h: f64 = 0.1;
        let taylor = 1.0 - h + h * h / 2.0 - h.powi(3) / 6.0 + h.powi(4) / 24.0;
        let y = rk4_step(&decay(), 0.0, &[1.0], h).unwrap();
        assert!((y[0] - taylor).abs() < 1e-15);
        assert!((y[0] - 0.9048375).abs() < 1e-7);
    }

    #[test]
    fn global_error_is_fourth_order() {
        let err = |dt: f64| {
            let y = integrate(&decay(), &[1.0], 1.0, dt, |_, _, _| Ok(())).unwrap();
            (y[0] - (-1f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((14.0..18.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn observer_sees_every_step() {
        let dt = 0.01;
        let mut times = Vec::new();
        integrate(&decay(), &[1.0], 10.0 * dt, dt, |k, t, _| {
            times.push((k, t));
            Ok(())
        })
        .unwrap();
        assert_eq!(times.len(), 11);
        assert_eq!(times[0], (0, 0.0));
        assert_eq!(times[10].1, 0.1);
    }

    #[test]
    fn final_step_is_shortened() {
        let mut last = 0.0;
        let mut count = 0;
        integrate(&decay(), &[1.0], 0.25, 0.1, |_, t, _| {
            last = t;
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 4);
        assert_eq!(last, 0.25);
    }

    #[test]
    fn rejects_bad_steps_and_blowups() {
        assert!(integrate(&decay(), &[1.0], 1.0, 2.0, |_, _, _| Ok(())).is_err());
        assert!(integrate(&decay(), &[1.0], 1.0, 0.0, |_, _, _| Ok(())).is_err());
        let blow = FnSystem::new(1, |_t, _y: &[f64], dy: &mut [f64]| dy[0] = f64::INFINITY);
        assert!(matches!(
            rk4_step(&blow, 0.0, &[1.0], 0.1),
            Err(Error::NonFiniteState { .. })
        ));
    }

    #[test]
    fn record_enforces_increasing_time() {
        let mut rec = TrajectoryRecord::new();
        rec.push(Sample::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.5))
            .unwrap();
        assert_eq!(rec.first().unwrap().gap, 0.5);
        assert!(rec
            .push(Sample::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0))
            .is_err());
        rec.push(Sample::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.1))
            .unwrap();
        assert!((rec.max_negative_gap() - 0.1).abs() < 1e-15);
    }
}
