//! Dense complex linear algebra on small quantum registers.

pub mod density;
pub mod entropy;
pub mod gates;
pub mod interchange;
pub mod matrix;
pub mod spectral;
pub mod unitary;

pub use density::{partial_trace, DensityMatrix, Subsystem};
pub use entropy::{binary_entropy, von_neumann_entropy, xlog2x};
pub use matrix::{hs_norm_sq, tensor_product, ComplexMatrix, DEFAULT_MAX_DIM};
pub use spectral::{eig_hermitian, eigenphases, unitary_eigenvalues, wrap_phase, HermitianEigen};
pub use unitary::{unitarity_residual, UnitaryOperator, UNITARITY_TOL};
