use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::unitary::UnitaryOperator;
use crate::error::{Error, Result};

/// Entrywise Hermiticity tolerance accepted by the Hermitian eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V·diag(λ)·V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda: Vec<Complex64> = self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::from_diagonal(&lambda)) * &v.adjoint()
    }
}

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let eig = SymmetricEigen::new(h.inner().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_inner(vectors),
    })
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::ContractViolation(format!(
            "matrix is not Hermitian (max |H - H†| = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix; no eigenvectors.
///
/// Dimensions 1 and 2 are handled in closed form since the entropic landscape
/// search calls this in its innermost loop.
pub(crate) fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    match h.nrows() {
        1 => vec![h[(0, 0)].re],
        2 => {
            let (p, q) = (h[(0, 0)].re, h[(1, 1)].re);
            let mean = 0.5 * (p + q);
            let half_gap = (0.25 * (p - q) * (p - q) + h[(0, 1)].norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ => {
            let mut vals: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Eigenvalues of a unitary, from the diagonal of its complex Schur form.
pub fn unitary_eigenvalues(u: &UnitaryOperator) -> Result<Vec<Complex64>> {
    let m = u.matrix().inner().clone();
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = Schur::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenphases θ_j ∈ (−π, π], sorted ascending.
pub fn eigenphases(u: &UnitaryOperator) -> Result<Vec<f64>> {
    let mut phases: Vec<f64> = unitary_eigenvalues(u)?
        .into_iter()
        .map(|z| wrap_phase(z.arg()))
        .collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}
