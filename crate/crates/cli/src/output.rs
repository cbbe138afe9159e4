use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::CliError;

pub const OUT_DIR_ENV: &str = "DQC1LAB_OUT_DIR";

/// Where the machine-readable report goes: --output, then $DQC1LAB_OUT_DIR/<command>.<ext>, then stdout.
pub fn target(args: &OutputArgs, command: &str) -> Option<PathBuf> {
    if let Some(p) = &args.output {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty())?;
    let ext = match args.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Some(PathBuf::from(dir).join(format!("{command}.{ext}")))
}

/// Opens the report sink and hands it to `write`.
pub fn emit<F>(args: &OutputArgs, command: &str, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match target(args, command) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
            }
            let file = File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(CliError::io)?;
            eprintln!("report written to {}", path.display());
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush().map_err(CliError::io)?;
        }
    }
    Ok(())
}

pub fn json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| CliError::internal(e.to_string()))?;
    writeln!(w).map_err(CliError::io)
}

/// A single-row CSV with the header taken from `row`'s field order.
pub fn csv_row<T: Serialize>(w: &mut dyn Write, row: &T) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.serialize(row).map_err(|e| CliError::internal(e.to_string()))?;
    out.flush().map_err(CliError::io)
}
