//! Matrix interchange format: `{"dim": d, "entries": [[re, im], ...]}`,
//! row-major. Floats are written in shortest round-trip form and parsed with
//! correct rounding, so finite values survive a write/read cycle bit-exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(value: MatrixJson) -> Result<Self> {
        let expected = value.dim.checked_mul(value.dim).ok_or_else(|| Error::Format("dim overflows".into()))?;
        if value.entries.len() != expected {
            return Err(Error::Format(format!(
                "dim {} requires {expected} entries, found {}",
                value.dim,
                value.entries.len()
            )));
        }
        let entries = value.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(value.dim, value.dim, entries)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.is_square() {
            return Err(serde::ser::Error::custom("interchange format only holds square matrices"));
        }
        MatrixJson {
            dim: self.nrows(),
            entries: self.row_major_entries().into_iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        ComplexMatrix::try_from(raw).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    Ok(serde_json::to_string(m)?)
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    matrix_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_matrix_file(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(m)?)?;
    Ok(())
}
