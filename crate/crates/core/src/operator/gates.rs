//! Fixed unitaries used throughout the examples and tests.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::unitary::UnitaryOperator;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn two_by_two(entries: [Complex64; 4]) -> UnitaryOperator {
    UnitaryOperator::from_certified(ComplexMatrix::from_inner(nalgebra::DMatrix::from_row_slice(2, 2, &entries)))
}

pub fn pauli_x() -> UnitaryOperator {
    two_by_two([ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> UnitaryOperator {
    two_by_two([ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> UnitaryOperator {
    two_by_two([ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> UnitaryOperator {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    two_by_two([s, s, s, -s])
}

/// R_r̂(ϑ) = exp(−iϑ r̂·σ/2) = cos(ϑ/2)·I − i sin(ϑ/2)·r̂·σ. The axis is normalised.
pub fn rotation(axis: [f64; 3], angle: f64) -> Result<UnitaryOperator> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite() && angle.is_finite()) {
        return Err(Error::Parameter(format!(
            "rotation needs a finite non-zero axis and finite angle, got {axis:?}, {angle}"
        )));
    }
    let [x, y, z] = axis.map(|v| v / norm);
    let (s, c) = (0.5 * angle).sin_cos();
    let cos = Complex64::new(c, 0.0);
    // −i·s·(r̂·σ)
    let m = [
        cos - I * s * z,
        -I * s * Complex64::new(x, -y),
        -I * s * Complex64::new(x, y),
        cos + I * s * z,
    ];
    Ok(two_by_two(m))
}

/// diag(e^{iθ_0}, e^{iθ_1}, …); length must be a power of two.
pub fn diagonal_unitary(phases: &[f64]) -> Result<UnitaryOperator> {
    let diag: Vec<Complex64> = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    UnitaryOperator::new(ComplexMatrix::from_diagonal(&diag))
}

/// The three-qubit braid unitary diag(c,c,d,1,c,d,1,1) with
/// c = −(e^{−i3π/5})⁴ and d = (e^{−i3π/5})⁸.
pub fn jones_unitary() -> UnitaryOperator {
    let w = Complex64::from_polar(1.0, -3.0 * PI / 5.0);
    let c = -w.powi(4);
    let d = w.powi(8);
    UnitaryOperator::from_certified(ComplexMatrix::from_diagonal(&[c, c, d, ONE, c, d, ONE, ONE]))
}
