use super::density::{DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};

/// x·log₂x with 0·log 0 = 0.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// H₂(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Entropy in bits of an eigenvalue spectrum; values in [−PSD_TOL, 0) count as 0.
pub fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &v in values {
        if v < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {v:.3e}")));
        }
        h -= xlog2x(v);
    }
    Ok(h.max(0.0))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues())
}
