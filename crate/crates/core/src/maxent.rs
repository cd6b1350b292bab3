//! Maximum-entropy machinery behind the entropy-production bound.
//!
//! Given a fixed reference state `ρ* = Σ p_i |p_i⟩⟨p_i|`, the comparison
//! state at "dynamic temperature" `α` is `σ(α) = (ρ*)^α / Z(α)`. The scalar
//! `α(t)` is pinned by matching `tr{σ ln ρ*}` to `tr{ρ(t) ln ρ*}`, i.e. by
//! solving `f(α) = d ln Z / dα = target`. `f` is strictly increasing because
//! its derivative `g(α)` is the variance of `ln p_i` under the tilted weights.
//!
//! Three bound evaluators are provided:
//!
//! - [`ClosedFormBound`] / [`bound_closed_form`]: solve for `α` from the
//!   accumulated flux and evaluate the bound exactly.
//! - [`BoundTracker`]: first-order incremental update driven by flux
//!   increments, `α += δΦ / g(α)` and `Σ̃ += (1 − α) δΦ`.
//! - [`bound_rate_form`]: `Σ_a + ∫ (φ − α φ̇) dt` from sampled series, used
//!   when the flux *rate* is the constrained observable.

use crate::quantum::{
    entropy_of_weights, expectation_log_potential, hermitian_eigen, von_neumann_entropy, CMatrix,
    DensityMatrix, C64,
};
use crate::{Error, Result};

const P_MIN: f64 = 1e-12;
const SUM_TOL: f64 = 1e-10;
const GAP_MIN: f64 = 1e-12;
const ORTHONORMAL_TOL: f64 = 1e-10;

const ALPHA_CAP: f64 = 1e6;
const BISECTION_WIDTH: f64 = 1e-8;
const NEWTON_RESIDUAL: f64 = 1e-12;
const SOLVE_TOL: f64 = 1e-10;
const SOLVE_MAX_ITER: usize = 200;

/// Smallest admissible `g(α)` for an incremental update.
pub const MIN_VARIANCE: f64 = 1e-15;

/// The reference state `ρ*`: a nondegenerate spectrum with its eigenbasis.
/// `ln ρ*` acts as the generalized potential whose expectation change is the
/// entropy flux.
#[derive(Debug, Clone)]
pub struct ReferencePotential {
    eigenvalues: Vec<f64>,
    log_eigenvalues: Vec<f64>,
    basis: CMatrix,
    log_matrix: CMatrix,
}

impl ReferencePotential {
    /// Validates spectrum and basis. `basis` holds the eigenvectors as columns.
    pub fn new(eigenvalues: Vec<f64>, basis: CMatrix) -> Result<Self> {
        let dim = eigenvalues.len();
        if dim < 2 {
            return Err(Error::DegenerateSpectrum(format!(
                "need at least two levels, got {dim}"
            )));
        }
        if basis.nrows() != dim || basis.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: basis.nrows(),
            });
        }
        if let Some(&p) = eigenvalues
            .iter()
            .find(|&&p| !(p > P_MIN && p < 1.0 - P_MIN))
        {
            return Err(Error::InvalidPotential(format!(
                "eigenvalue {p:e} outside ({P_MIN:e}, 1 - {P_MIN:e})"
            )));
        }
        let total: f64 = eigenvalues.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPotential(format!(
                "eigenvalues sum to {total}"
            )));
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let gap = (eigenvalues[i] - eigenvalues[j]).abs();
                if gap <= GAP_MIN {
                    return Err(Error::DegenerateSpectrum(format!(
                        "p[{i}] and p[{j}] differ by {gap:e}"
                    )));
                }
            }
        }
        let gram = basis.adjoint() * &basis;
        let off = (gram - CMatrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if off > ORTHONORMAL_TOL {
            return Err(Error::InvalidPotential(format!(
                "basis is not orthonormal (deviation {off:e})"
            )));
        }

        let log_eigenvalues: Vec<f64> = eigenvalues.iter().map(|p| p.ln()).collect();
        let log_matrix = spectral_sum(&basis, &log_eigenvalues);
        Ok(Self {
            eigenvalues,
            log_eigenvalues,
            basis,
            log_matrix,
        })
    }

    /// Potential diagonal in the computational basis.
    pub fn diagonal(eigenvalues: &[f64]) -> Result<Self> {
        let dim = eigenvalues.len();
        Self::new(eigenvalues.to_vec(), CMatrix::identity(dim, dim))
    }

    /// Diagonal potential from unnormalized positive weights, e.g. Boltzmann
    /// factors `e^{-βE_i}`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidPotential(
                "weights must be positive".to_string(),
            ));
        }
        let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Self::diagonal(&p)
    }

    /// Takes `ρ*` from a full-rank density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let spec = hermitian_eigen(rho.matrix())?;
        Self::new(spec.eigenvalues, spec.eigenvectors)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// The matrix `ln ρ*`.
    pub fn log_matrix(&self) -> &CMatrix {
        &self.log_matrix
    }

    /// `(ln min p_i, ln max p_i)`, the open range of `f`.
    pub fn log_range(&self) -> (f64, f64) {
        let lo = self
            .log_eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .log_eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// `Re tr{m ln ρ*}` for any square matrix of matching size.
    pub fn log_trace(&self, m: &CMatrix) -> f64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += m[(i, j)] * self.log_matrix[(j, i)];
            }
        }
        acc.re
    }

    /// `ρ*` itself.
    pub fn as_density(&self) -> Result<DensityMatrix> {
        crate::quantum::validate_density(spectral_sum(&self.basis, &self.eigenvalues))
    }

    /// Tilted weights `p_i^α / Z(α)` in basis order.
    pub fn tilted_weights(&self, alpha: f64) -> Vec<f64> {
        self.tilt(alpha).weights
    }

    fn tilt(&self, alpha: f64) -> Tilt {
        let exponents: Vec<f64> = self.log_eigenvalues.iter().map(|l| alpha * l).collect();
        let shift = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = exponents.iter().map(|e| (e - shift).exp()).collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let mean: f64 = weights
            .iter()
            .zip(&self.log_eigenvalues)
            .map(|(w, l)| w * l)
            .sum();
        let variance: f64 = weights
            .iter()
            .zip(&self.log_eigenvalues)
            .map(|(w, l)| w * (l - mean) * (l - mean))
            .sum();
        Tilt {
            log_z: shift + sum.ln(),
            mean,
            variance,
            weights,
        }
    }
}

struct Tilt {
    log_z: f64,
    mean: f64,
    variance: f64,
    weights: Vec<f64>,
}

fn spectral_sum(basis: &CMatrix, values: &[f64]) -> CMatrix {
    let n = values.len();
    let d = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    basis * d * basis.adjoint()
}

/// `ln Z(α) = ln Σ p_i^α`, evaluated with a max shift.
pub fn log_partition(pot: &ReferencePotential, alpha: f64) -> f64 {
    pot.tilt(alpha).log_z
}

/// `f(α) = Σ p̃_i ln p_i` with `p̃_i = p_i^α / Z(α)`.
pub fn constraint_f(pot: &ReferencePotential, alpha: f64) -> f64 {
    pot.tilt(alpha).mean
}

/// `g(α) = f'(α)`, the variance of `ln p_i` under the tilted weights.
pub fn constraint_f_prime(pot: &ReferencePotential, alpha: f64) -> f64 {
    pot.tilt(alpha).variance
}

/// Unique `α` with `f(α) = target`.
///
/// Brackets by doubling outward from `[-1, 1]`, bisects to a narrow bracket,
/// then polishes with safeguarded Newton steps using `g(α)`.
pub fn solve_alpha(pot: &ReferencePotential, target: f64) -> Result<f64> {
    let (lower, upper) = pot.log_range();
    if !(target > lower && target < upper) {
        return Err(Error::TargetOutOfRange {
            target,
            lower,
            upper,
        });
    }
    let f = |a: f64| constraint_f(pot, a);
    let fail = |iterations| Error::ConvergenceFailure {
        what: "alpha solve",
        iterations,
    };

    let mut iterations = 0;
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    while f(lo) > target {
        hi = lo;
        lo *= 2.0;
        iterations += 1;
        if lo < -ALPHA_CAP {
            return Err(fail(iterations));
        }
    }
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if hi > ALPHA_CAP {
            return Err(fail(iterations));
        }
    }

    while hi - lo > BISECTION_WIDTH {
        iterations += 1;
        if iterations > SOLVE_MAX_ITER {
            return Err(fail(iterations));
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut alpha = 0.5 * (lo + hi);
    let mut residual = f(alpha) - target;
    while iterations < SOLVE_MAX_ITER {
        iterations += 1;
        if residual == 0.0 {
            break;
        }
        if residual < 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let g = constraint_f_prime(pot, alpha);
        let mut next = alpha - residual / g;
        if !(g > 0.0) || !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - alpha).abs();
        alpha = next;
        residual = f(alpha) - target;
        if residual.abs() <= NEWTON_RESIDUAL && step <= 4.0 * f64::EPSILON * (1.0 + alpha.abs()) {
            break;
        }
    }
    if residual.abs() <= SOLVE_TOL {
        Ok(alpha)
    } else {
        Err(fail(iterations))
    }
}

/// `σ(α) = Σ_i (p_i^α / Z(α)) |p_i⟩⟨p_i|`.
pub fn sigma_state(pot: &ReferencePotential, alpha: f64) -> DensityMatrix {
    let weights = pot.tilted_weights(alpha);
    DensityMatrix::from_trusted(spectral_sum(&pot.basis, &weights))
}

/// `Σ_a = S(σ(α₀)) − S(ρ₀)` with `α₀` solving `f(α₀) = tr{ρ₀ ln ρ*}`.
/// Returns `(Σ_a, α₀)`.
pub fn adiabatic_entropy_production(
    rho0: &DensityMatrix,
    pot: &ReferencePotential,
) -> Result<(f64, f64)> {
    let target = expectation_log_potential(rho0, pot)?;
    let alpha0 = solve_alpha(pot, target)?;
    let s_sigma = entropy_of_weights(pot.tilted_weights(alpha0));
    let s_rho = von_neumann_entropy(rho0)?;
    Ok((s_sigma - s_rho, alpha0))
}

/// `Φ = tr{(ρ(t) − ρ(0)) ln ρ*}`.
pub fn flux_from_potential(
    rho_t: &DensityMatrix,
    rho0: &DensityMatrix,
    pot: &ReferencePotential,
) -> Result<f64> {
    for d in [rho_t.dim(), rho0.dim()] {
        if d != pot.dim() {
            return Err(Error::DimensionMismatch {
                expected: pot.dim(),
                found: d,
            });
        }
    }
    Ok(pot.log_trace(&(rho_t.matrix() - rho0.matrix())))
}

/// Exact bound evaluator for a fixed initial state; caches `tr{ρ₀ ln ρ*}`
/// and `S(ρ₀)` across flux values.
#[derive(Debug, Clone)]
pub struct ClosedFormBound<'a> {
    pot: &'a ReferencePotential,
    initial_potential: f64,
    initial_entropy: f64,
}

impl<'a> ClosedFormBound<'a> {
    pub fn new(rho0: &DensityMatrix, pot: &'a ReferencePotential) -> Result<Self> {
        Ok(Self {
            pot,
            initial_potential: expectation_log_potential(rho0, pot)?,
            initial_entropy: von_neumann_entropy(rho0)?,
        })
    }

    /// `tr{ρ₀ ln ρ*}`.
    pub fn initial_potential(&self) -> f64 {
        self.initial_potential
    }

    /// `(Σ̃, α)` for accumulated flux `Φ`:
    /// `Σ̃ = Φ − αΦ − α tr{ρ₀ ln ρ*} + ln Z(α) − S(ρ₀)`.
    pub fn evaluate(&self, flux: f64) -> Result<(f64, f64)> {
        let alpha = solve_alpha(self.pot, self.initial_potential + flux)?;
        let bound = flux - alpha * flux - alpha * self.initial_potential
            + log_partition(self.pot, alpha)
            - self.initial_entropy;
        Ok((bound, alpha))
    }
}

pub fn bound_closed_form(
    rho0: &DensityMatrix,
    pot: &ReferencePotential,
    flux: f64,
) -> Result<(f64, f64)> {
    ClosedFormBound::new(rho0, pot)?.evaluate(flux)
}

/// Running state of the incremental bound algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTracker {
    pub t: f64,
    pub alpha: f64,
    pub flux: f64,
    pub bound: f64,
    pub sigma_a: f64,
}

impl BoundTracker {
    /// Starts at `α = α₀`, `Φ = 0`, `Σ̃ = Σ_a`.
    pub fn start(rho0: &DensityMatrix, pot: &ReferencePotential) -> Result<Self> {
        let (sigma_a, alpha0) = adiabatic_entropy_production(rho0, pot)?;
        Ok(Self {
            t: 0.0,
            alpha: alpha0,
            flux: 0.0,
            bound: sigma_a,
            sigma_a,
        })
    }

    /// One update with flux increment `δΦ`; time is left unchanged.
    pub fn step(&self, pot: &ReferencePotential, delta_flux: f64) -> Result<Self> {
        if delta_flux == 0.0 {
            return Ok(*self);
        }
        let variance = constraint_f_prime(pot, self.alpha);
        if !(variance >= MIN_VARIANCE) {
            return Err(Error::DegenerateVariance { variance });
        }
        Ok(Self {
            alpha: self.alpha + delta_flux / variance,
            flux: self.flux + delta_flux,
            bound: self.bound + (1.0 - self.alpha) * delta_flux,
            ..*self
        })
    }

    pub fn advance(&self, pot: &ReferencePotential, dt: f64, delta_flux: f64) -> Result<Self> {
        let mut next = self.step(pot, delta_flux)?;
        next.t = self.t + dt;
        Ok(next)
    }
}

fn check_series(times: &[f64], others: &[(&str, &[f64])]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::SeriesTooShort { len: times.len() });
    }
    for (name, s) in others {
        if s.len() != times.len() {
            return Err(Error::LengthMismatch(format!(
                "{name} has {} samples, times has {}",
                s.len(),
                times.len()
            )));
        }
    }
    if let Some(index) = times.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotoneTime { index: index + 1 });
    }
    Ok(())
}

/// `dφ/dt` by centered differences, one-sided at the endpoints.
pub fn finite_difference(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (values[b] - values[a]) / (times[b] - times[a])
        })
        .collect()
}

/// Running `Σ_a + ∫₀ᵗ (φ − α φ̇) dt` at every sample (trapezoidal rule).
pub fn bound_rate_form_series(
    sigma_a: f64,
    times: &[f64],
    phi: &[f64],
    alpha: &[f64],
) -> Result<Vec<f64>> {
    check_series(times, &[("phi", phi), ("alpha", alpha)])?;
    let phi_dot = finite_difference(times, phi);
    let integrand: Vec<f64> = (0..times.len())
        .map(|i| phi[i] - alpha[i] * phi_dot[i])
        .collect();
    let mut out = Vec::with_capacity(times.len());
    let mut acc = sigma_a;
    out.push(acc);
    for i in 1..times.len() {
        acc += 0.5 * (times[i] - times[i - 1]) * (integrand[i] + integrand[i - 1]);
        out.push(acc);
    }
    Ok(out)
}

/// Terminal value of [`bound_rate_form_series`].
pub fn bound_rate_form(sigma_a: f64, times: &[f64], phi: &[f64], alpha: &[f64]) -> Result<f64> {
    let series = bound_rate_form_series(sigma_a, times, phi, alpha)?;
    Ok(*series.last().expect("checked non-empty"))
}
