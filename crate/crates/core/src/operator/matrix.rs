use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest row or column count a tensor product may produce unless a
/// different limit is passed to [`ComplexMatrix::kron_with_limit`].
pub const DEFAULT_MAX_DIM: usize = 1 << 12;

/// Dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::Dimension("matrix must be non-empty".into()));
        }
        if let Some((idx, _)) = inner
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Numeric(format!(
                "non-finite entry at column-major index {idx}"
            )));
        }
        Ok(Self(inner))
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Wraps a matrix produced by arithmetic on already-validated operands.
    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(inner)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self(DMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj()))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn row_major_entries(&self) -> Vec<Complex64> {
        let (r, c) = self.0.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.diagonal().iter().sum()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    /// Tr(A·B) without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex64 {
        assert_eq!(self.ncols(), rhs.nrows());
        assert_eq!(self.nrows(), rhs.ncols());
        trace_of_product(&self.0, &rhs.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A_ij − conj(A_ji)|; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        self.kron_with_limit(rhs, DEFAULT_MAX_DIM)
    }

    pub fn kron_with_limit(&self, rhs: &Self, max_dim: usize) -> Result<Self> {
        let rows = self.nrows().checked_mul(rhs.nrows());
        let cols = self.ncols().checked_mul(rhs.ncols());
        match (rows, cols) {
            (Some(r), Some(c)) if r <= max_dim && c <= max_dim => {}
            _ => {
                return Err(Error::Dimension(format!(
                    "tensor product of {}x{} and {}x{} exceeds the maximum dimension {max_dim}",
                    self.nrows(),
                    self.ncols(),
                    rhs.nrows(),
                    rhs.ncols()
                )))
            }
        }
        Ok(Self(self.0.kronecker(&rhs.0)))
    }
}

pub(crate) fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Kronecker product A ⊗ B, limited to [`DEFAULT_MAX_DIM`].
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Squared Hilbert–Schmidt norm Tr(A†A).
pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.hs_norm_sq()
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::gates;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_row_major(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::Numeric(_))));
        let err = ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 0.0)]);
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn sigma_z_tensor_identity_is_diagonal() {
        let z = gates::pauli_z();
        let out = tensor_product(z.matrix(), &ComplexMatrix::identity(2)).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(out, expected);
    }

    #[test]
    fn kron_respects_dimension_limit() {
        let a = ComplexMatrix::identity(64);
        let b = ComplexMatrix::identity(128);
        assert!(matches!(a.kron(&b), Err(Error::Dimension(_))));
        assert!(a.kron_with_limit(&b, 1 << 13).is_ok());
    }

    #[test]
    fn kron_entry_matches_naive_quadruple_loop() {
        let a = ComplexMatrix::from_row_major(2, 2, vec![c(0.3, -1.2), c(0.7, 0.1), c(-0.4, 0.9), c(1.1, 0.5)]).unwrap();
        let b = ComplexMatrix::from_row_major(2, 2, vec![c(-0.8, 0.2), c(0.6, -0.3), c(0.05, 1.4), c(-1.0, -0.6)]).unwrap();
        let k = tensor_product(&a, &b).unwrap();
        // Block layout: row 2·i_a + i_b, column 2·j_a + j_b.
        let mut naive = vec![vec![c(0.0, 0.0); 4]; 4];
        for ia in 0..2 {
            for ja in 0..2 {
                for ib in 0..2 {
                    for jb in 0..2 {
                        naive[2 * ia + ib][2 * ja + jb] = a.get(ia, ja) * b.get(ib, jb);
                    }
                }
            }
        }
        for (i, row) in naive.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(k.get(i, j), *v);
            }
        }
        assert_eq!(k.get(2, 1), a.get(1, 0) * b.get(0, 1));
        assert_eq!(k.get(2, 3), a.get(1, 1) * b.get(0, 1));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm_sq(&ComplexMatrix::zeros(3, 3)), 0.0);
        assert_eq!(hs_norm_sq(&ComplexMatrix::identity(5)), 5.0);
        let x = gates::pauli_x();
        let y = gates::pauli_y();
        let sum = x.matrix() + &y.matrix().scale(c(0.0, 1.0));
        assert!((hs_norm_sq(&sum) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn trace_of_product_matches_full_product() {
        let a = ComplexMatrix::from_row_major(2, 3, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 0.25)]).unwrap();
        let b = ComplexMatrix::from_row_major(3, 2, vec![c(0.5, 0.0), c(1.0, -1.0), c(2.0, 2.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.3, 0.3)]).unwrap();
        let direct = (&a * &b).trace();
        assert!((a.trace_of_product(&b) - direct).norm() < 1e-14);
    }
}
