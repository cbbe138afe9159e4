//! Quantum correlations in the output of the one-clean-qubit (DQC1) model.
//!
//! The crate builds DQC1 output states, evaluates their geometric discord
//! and (for a single bottom qubit) entropic discord in closed form, and
//! checks each closed form against a brute-force search over projective
//! measurements of the clean qubit. It also covers Haar-random typicality
//! of the geometric discord and a shot-level simulation of the
//! trace-estimation readout.

pub mod dqc1;
pub mod entropic;
pub mod error;
pub mod geometric;
pub mod haar;
pub mod operator;
pub mod search;
pub mod shots;

pub use error::{Error, Result};
