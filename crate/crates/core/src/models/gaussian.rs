//! Single-mode Gaussian states without displacement.
//!
//! Such a state is thermal in some Bogoliubov mode `B = c a† + d a`
//! (`|c|² − |d|² = 1`), with occupation `u = ⟨B†B⟩`. From
//! `⟨a†a⟩ = |d|² + (1 + 2|d|²)u` and `|⟨aa⟩|² = |d|²|c|²(1 + 2u)²` it follows
//! that `(n − u)(n + u + 1) = |m|²`, so `u` is fixed by the second moments
//! alone and the entropy is that of a thermal mode with occupation `u`.

use crate::quantum::C64;
use crate::{Error, Result};

const PHYSICALITY_TOL: f64 = 1e-9;

/// First and second moments `⟨a⟩`, `⟨a†a⟩`, `⟨aa⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean: C64,
    pub occupation: f64,
    pub anomalous: C64,
}

impl GaussianState {
    /// `S(ε)|0⟩` for a real squeeze parameter `ε`:
    /// `⟨a†a⟩ = sinh²ε`, `⟨aa⟩ = −sinh ε cosh ε`.
    pub fn squeezed_vacuum(epsilon: f64) -> Self {
        Self {
            mean: C64::new(0.0, 0.0),
            occupation: epsilon.sinh().powi(2),
            anomalous: C64::new(-epsilon.sinh() * epsilon.cosh(), 0.0),
        }
    }

    pub fn thermal(occupation: f64) -> Self {
        Self {
            mean: C64::new(0.0, 0.0),
            occupation,
            anomalous: C64::new(0.0, 0.0),
        }
    }

    pub fn from_vector(y: &[f64]) -> Self {
        Self {
            mean: C64::new(y[0], y[1]),
            occupation: y[2],
            anomalous: C64::new(y[3], y[4]),
        }
    }

    pub fn to_vector(&self) -> [f64; 5] {
        [
            self.mean.re,
            self.mean.im,
            self.occupation,
            self.anomalous.re,
            self.anomalous.im,
        ]
    }

    /// Checks `⟨a†a⟩ ≥ 0` and `⟨a†a⟩(⟨a†a⟩ + 1) ≥ |⟨aa⟩|²`.
    pub fn validate(&self) -> Result<()> {
        let n = self.occupation;
        if !(n >= -PHYSICALITY_TOL) {
            return Err(Error::Unphysical(format!("occupation {n} is negative")));
        }
        let limit = (n.max(0.0) * (n.max(0.0) + 1.0)).sqrt() + PHYSICALITY_TOL;
        if !(self.anomalous.norm() <= limit) {
            return Err(Error::Unphysical(format!(
                "|<aa>| = {} exceeds sqrt(n(n+1)) = {}",
                self.anomalous.norm(),
                limit - PHYSICALITY_TOL
            )));
        }
        Ok(())
    }

    /// Bogoliubov-mode occupation `u` of this state.
    pub fn effective_occupation(&self) -> Result<f64> {
        gaussian_occupation_u(self.occupation, self.anomalous.norm_sqr())
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(gaussian_entropy(self.effective_occupation()?))
    }
}

/// Nonnegative root of `(n − u)(n + u + 1) = |m|²`,
/// `u = (−1 + √(1 + 4(n² + n − |m|²)))/2`.
pub fn gaussian_occupation_u(n: f64, m_abs2: f64) -> Result<f64> {
    if !(n >= 0.0) || !(m_abs2 >= 0.0) {
        return Err(Error::Unphysical(format!(
            "moments must be nonnegative, got n = {n}, |m|^2 = {m_abs2}"
        )));
    }
    let disc = n * n + n - m_abs2;
    if disc < -PHYSICALITY_TOL {
        return Err(Error::Unphysical(format!(
            "n(n+1) - |m|^2 = {disc:e} is negative"
        )));
    }
    let disc = disc.max(0.0);
    // rationalized root, exact zero for pure states
    Ok(2.0 * disc / (1.0 + (1.0 + 4.0 * disc).sqrt()))
}

/// Entropy of a thermal mode with occupation `u`: `(1+u)ln(1+u) − u ln u`.
pub fn gaussian_entropy(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    (1.0 + u) * u.ln_1p() - u * u.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_moments_give_u_equal_n() {
        for n in [0.0, 0.3, 2.0, 17.5] {
            assert!((gaussian_occupation_u(n, 0.0).unwrap() - n).abs() < 1e-12 * (1.0 + n));
        }
    }

    #[test]
    fn pure_squeezed_state_has_zero_u() {
        for r in [0.1, 0.5, 1.0, 1.5] {
            let s = GaussianState::squeezed_vacuum(-r);
            assert!(s.effective_occupation().unwrap() <= 1e-12);
            assert!(s.entropy().unwrap() < 1e-10);
        }
    }

    #[test]
    fn quadratic_root() {
        let u = gaussian_occupation_u(1.0, 0.5).unwrap();
        assert!((u - (-1.0 + 7f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!(u <= 1.0);
        assert!(((1.0 - u) * (1.0 + u + 1.0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(gaussian_entropy(0.0), 0.0);
        assert!((gaussian_entropy(1.0) - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unphysical_moments() {
        assert!(matches!(
            gaussian_occupation_u(1.0, 3.0),
            Err(Error::Unphysical(_))
        ));
        assert!(gaussian_occupation_u(-0.5, 0.0).is_err());
        let bad = GaussianState {
            anomalous: C64::new(3.0, 0.0),
            ..GaussianState::thermal(1.0)
        };
        assert!(bad.validate().is_err());
        assert!(GaussianState::squeezed_vacuum(1.0).validate().is_ok());
    }
}
