//! Finite-dimensional density-matrix arithmetic.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::maxent::ReferencePotential;
use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance on Hermiticity, unit trace and eigenvalue sign.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros (`0 ln 0 = 0`).
pub const EIGEN_FLOOR: f64 = 1e-14;

const EIGEN_MAX_ITER: usize = 10_000;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = C64::new(1.0 / dim as f64, 0.0);
        Self {
            matrix: CMatrix::from_diagonal_element(dim, dim, w),
        }
    }

    /// Projector onto the computational basis state `|k⟩`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(k, k)] = C64::new(1.0, 0.0);
        Self { matrix }
    }

    /// Validates a real diagonal of populations.
    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(populations[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        validate_density(m)
    }

    /// Symmetrizes `m` without checking trace or positivity; for states built
    /// from a known spectrum.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        let matrix = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self { matrix }
    }

    /// `⟨v|ρ|v⟩` for a column of `basis`.
    pub(crate) fn diagonal_in(&self, basis: &CMatrix, col: usize) -> f64 {
        let v = basis.column(col);
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let d = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.eigenvalues[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// The input is symmetrized before decomposition.
pub fn hermitian_eigen(m: &CMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER).ok_or(
        Error::ConvergenceFailure {
            what: "Hermitian eigensolver",
            iterations: EIGEN_MAX_ITER,
        },
    )?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let n = order.len();
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

pub fn validate_density(m: CMatrix) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let deviation = hermitian_deviation(&m);
    if deviation > VALIDATION_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > VALIDATION_TOL || trace.im.abs() > VALIDATION_TOL {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let matrix = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let spectrum = hermitian_eigen(&matrix)?;
    let lowest = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if lowest < -VALIDATION_TOL {
        return Err(Error::NegativeEigenvalue { value: lowest });
    }
    Ok(DensityMatrix { matrix })
}

/// Spectrum of a density matrix, with eigenvalues within [`EIGEN_FLOOR`] of
/// 0 or 1 clipped onto the boundary.
pub fn eigendecompose(rho: &DensityMatrix) -> Result<Spectrum> {
    let mut spectrum = hermitian_eigen(&rho.matrix)?;
    for lambda in &mut spectrum.eigenvalues {
        if *lambda < 0.0 && *lambda > -EIGEN_FLOOR {
            *lambda = 0.0;
        } else if *lambda > 1.0 && *lambda < 1.0 + EIGEN_FLOOR {
            *lambda = 1.0;
        }
    }
    Ok(spectrum)
}

/// `−Σ λ ln λ` in nats over eigenvalues above [`EIGEN_FLOOR`].
pub fn entropy_of_weights(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|&w| w > EIGEN_FLOOR)
        .map(|w| -w * w.ln())
        .sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = eigendecompose(rho)?;
    Ok(entropy_of_weights(spectrum.eigenvalues).max(0.0))
}

/// Quantum relative entropy `D(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ`.
///
/// Returns `f64::INFINITY` when the support of `ρ` is not contained in the
/// support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -entropy_of_weights(eigendecompose(rho)?.eigenvalues);
    let sigma_spec = eigendecompose(sigma)?;
    let mut cross = 0.0;
    for (j, &s) in sigma_spec.eigenvalues.iter().enumerate() {
        let weight = rho.diagonal_in(&sigma_spec.eigenvectors, j);
        if s <= EIGEN_FLOOR {
            if weight > EIGEN_FLOOR {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.ln();
    }
    Ok(neg_entropy - cross)
}

/// `tr{ρ ln ρ*}`.
pub fn expectation_log_potential(rho: &DensityMatrix, pot: &ReferencePotential) -> Result<f64> {
    if rho.dim() != pot.dim() {
        return Err(Error::DimensionMismatch {
            expected: pot.dim(),
            found: rho.dim(),
        });
    }
    Ok(pot.log_trace(&rho.matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real2(a: f64, b: f64, c: f64, d: f64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(a, 0.0),
                C64::new(b, 0.0),
                C64::new(c, 0.0),
                C64::new(d, 0.0),
            ],
        )
    }

    #[test]
    fn accepts_valid_states() {
        assert!(validate_density(real2(0.5, 0.0, 0.0, 0.5)).is_ok());
        assert!(validate_density(real2(0.7, 0.1, 0.1, 0.3)).is_ok());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        // 0.5 - sqrt(0.04 + 0.25) < 0
        let expected = 0.5 - (0.04_f64 + 0.25).sqrt();
        match validate_density(real2(0.7, 0.5, 0.5, 0.3)) {
            Err(Error::NegativeEigenvalue { value }) => assert!((value - expected).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_hermitian_and_bad_trace() {
        assert!(matches!(
            validate_density(real2(0.5, 0.2, 0.1, 0.5)),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            validate_density(real2(0.6, 0.0, 0.0, 0.5)),
            Err(Error::TraceNotOne { .. })
        ));
        assert!(matches!(
            validate_density(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn qubit_spectrum_matches_closed_form() {
        let rho = validate_density(real2(0.7, 0.1, 0.1, 0.3)).unwrap();
        let spec = eigendecompose(&rho).unwrap();
        let r = (0.04_f64 + 0.01).sqrt();
        assert!((spec.eigenvalues[0] - (0.5 + r)).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - (0.5 - r)).abs() < 1e-14);

        let mixed = DensityMatrix::maximally_mixed(2);
        let spec = eigendecompose(&mixed).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.5, 0.5]);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(
            von_neumann_entropy(&DensityMatrix::basis_state(2, 0)).unwrap(),
            0.0
        );
        let s3 = von_neumann_entropy(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((s3 - 3f64.ln()).abs() < 1e-13);

        // 2x2 closed-form oracle for p = 0.3, c = 0.1.
        let r = (0.2_f64 * 0.2 + 0.01).sqrt();
        let (lp, lm) = (0.5 + r, 0.5 - r);
        let oracle = -lp * lp.ln() - lm * lm.ln();
        assert!((oracle - 0.5895).abs() < 5e-5);
        let rho = validate_density(real2(0.7, 0.1, 0.1, 0.3)).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - oracle).abs() < 1e-13);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = validate_density(real2(0.7, 0.1, 0.1, 0.3)).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);

        let a = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let kl = 0.5 * (0.5_f64 / 0.75).ln() + 0.5 * (0.5_f64 / 0.25).ln();
        assert!((kl - 0.1438).abs() < 5e-5);
        assert!((relative_entropy(&a, &b).unwrap() - kl).abs() < 1e-13);

        let zero = DensityMatrix::basis_state(2, 0);
        let one = DensityMatrix::basis_state(2, 1);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert!(matches!(
            relative_entropy(&zero, &DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn log_potential_expectation() {
        let pot = ReferencePotential::diagonal(&[0.7311, 0.2689]).unwrap();
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let direct = 0.7 * 0.7311_f64.ln() + 0.3 * 0.2689_f64.ln();
        assert!((expectation_log_potential(&rho, &pot).unwrap() - direct).abs() < 1e-14);

        let mixed = DensityMatrix::maximally_mixed(2);
        let avg = 0.5 * (0.7311_f64.ln() + 0.2689_f64.ln());
        assert!((expectation_log_potential(&mixed, &pot).unwrap() - avg).abs() < 1e-14);

        let star = pot.as_density().unwrap();
        let s = von_neumann_entropy(&star).unwrap();
        assert!((expectation_log_potential(&star, &pot).unwrap() + s).abs() < 1e-13);
    }
}
