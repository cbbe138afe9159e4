use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Certificate threshold on max |U†U − I|.
pub const UNITARITY_TOL: f64 = 1e-10;

/// max |U†U − I| over all entries.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let gram = &m.adjoint() * m;
    gram.max_abs_diff(&ComplexMatrix::identity(m.nrows()))
}

/// A unitary on `n_qubits` qubits, checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubit_count(&matrix)?;
        let residual = unitarity_residual(&matrix);
        if residual.is_nan() || residual > UNITARITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { n_qubits, matrix })
    }

    /// For products and conjugations of certified unitaries, where the
    /// residual may accumulate a few ulps beyond the construction threshold.
    pub(crate) fn from_certified(matrix: ComplexMatrix) -> Self {
        let n_qubits = qubit_count(&matrix).expect("certified unitary has power-of-two dimension");
        debug_assert!(unitarity_residual(&matrix) <= 1e3 * UNITARITY_TOL);
        Self { n_qubits, matrix }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            matrix: ComplexMatrix::identity(1 << n_qubits),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Tr(U²), evaluated without forming U².
    pub fn trace_of_square(&self) -> Complex64 {
        self.matrix.trace_of_product(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_certified(self.matrix.adjoint())
    }

    /// self · rhs.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::Dimension(format!(
                "cannot compose unitaries of dimension {} and {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(Self::from_certified(&self.matrix * &rhs.matrix))
    }

    pub fn squared(&self) -> Self {
        Self::from_certified(&self.matrix * &self.matrix)
    }

    /// e^{iξ}·U.
    pub fn with_global_phase(&self, xi: f64) -> Self {
        Self::from_certified(self.matrix.scale(Complex64::from_polar(1.0, xi)))
    }

    /// V·U·V†.
    pub fn conjugated_by(&self, v: &Self) -> Result<Self> {
        v.compose(self)?.compose(&v.adjoint())
    }
}

fn qubit_count(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "unitary must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let d = m.nrows();
    if !d.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "unitary dimension {d} is not a power of two"
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

impl Serialize for UnitaryOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitaryOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        UnitaryOperator::new(m).map_err(serde::de::Error::custom)
    }
}
