use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::spectral::{hermitian_eigenvalues, HERMITIAN_TOL};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue a density matrix may carry.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = hermitian_eigenvalues(matrix.inner())[0];
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// |ψ⟩⟨ψ| for a normalised vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("state vector has norm² {norm}")));
        }
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_product(&self.matrix).re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.inner())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.kron(&other.matrix)?)
    }
}

/// Partial trace over one factor of a bipartite `d_A × d_B` system.
pub fn partial_trace(rho: &DensityMatrix, dims: [usize; 2], keep: Subsystem) -> Result<DensityMatrix> {
    let [da, db] = dims;
    if da == 0 || db == 0 || da.checked_mul(db) != Some(rho.dim()) {
        return Err(Error::Dimension(format!(
            "dims {da}x{db} do not factor a {0}x{0} density matrix",
            rho.dim()
        )));
    }
    let m = rho.matrix().inner();
    let reduced = match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    DensityMatrix::new(ComplexMatrix::from_inner(reduced))
}
