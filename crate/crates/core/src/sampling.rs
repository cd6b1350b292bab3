//! Random valid inputs for property checks and the `check` command.

use rand::Rng;

use crate::maxent::ReferencePotential;
use crate::quantum::{hermitian_eigen, validate_density, CMatrix, DensityMatrix, C64};
use crate::Result;

fn random_complex<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Full-rank random state `G G† / tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        let g = random_complex(rng, dim);
        let m = &g * g.adjoint();
        let trace = m.trace().re;
        if let Ok(rho) = validate_density(m / C64::new(trace, 0.0)) {
            return rho;
        }
    }
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<CMatrix> {
    let g = random_complex(rng, dim);
    Ok(hermitian_eigen(&(&g + g.adjoint()))?.eigenvectors)
}

/// Random nondegenerate potential in a random basis. Eigenvalues are drawn
/// from `[0.02, 1)` before normalization and kept at least `min_gap` apart.
pub fn random_potential<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    min_gap: f64,
) -> Result<ReferencePotential> {
    let weights = loop {
        let w: Vec<f64> = (0..dim).map(|_| rng.random_range(0.02..1.0)).collect();
        let total: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / total).collect();
        let separated = (0..dim).all(|i| (i + 1..dim).all(|j| (p[i] - p[j]).abs() > min_gap));
        if separated {
            break p;
        }
    };
    ReferencePotential::new(weights, random_unitary(rng, dim)?)
}
