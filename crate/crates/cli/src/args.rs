use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqc1lab::haar::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "dqc1lab", version, about = "Quantum discord of one-clean-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric discord: closed form against brute-force minimisation.
    Gqd {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = dqc1lab::geometric::DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entropic discord of a two-qubit state (single-qubit U).
    Discord2 {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = dqc1lab::entropic::DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Geometric distance g/α² over the measurement domain.
    Landscape {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 101)]
        res_a: usize,
        #[arg(long, default_value_t = 101)]
        res_phi: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// τ₂ and discord statistics over Haar-random unitaries.
    HaarStudy {
        /// Qubit counts: a single value or an inclusive range such as 2..7.
        #[arg(long, default_value = "2..7", value_parser = parse_range)]
        n: QubitRange,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Include every τ₂ sample in the JSON report.
        #[arg(long)]
        keep_samples: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-shot estimate of the geometric discord.
    Shots {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Shots per observable.
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        /// Use exact expectations instead of sampling.
        #[arg(long)]
        noiseless: bool,
        /// Parametric bootstrap replicates for a second σ(τ₂).
        #[arg(long)]
        bootstrap: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Worked example on the eight-level diagonal unitary.
    JonesDemo {
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long, default_value_t = dqc1lab::geometric::DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Identity,
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    Rotation,
    Jones,
    Haar,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum, conflicts_with = "file")]
    pub builtin: Option<Builtin>,
    /// Unitary in the matrix JSON format.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Rotation angle in radians; implies `--builtin rotation`.
    #[arg(long, conflicts_with = "file")]
    pub rotation_angle: Option<f64>,
    /// Rotation axis as x,y,z.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.0, 0.0, 1.0])]
    pub axis: Vec<f64>,
    /// Rotation angle in radians.
    #[arg(long)]
    pub angle: Option<f64>,
    /// Qubits for identity and haar.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file. Defaults to stdout, or to a file in $DQC1LAB_OUT_DIR when set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exit with status 4 when the report carries a precision warning.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitRange(pub Vec<usize>);

fn parse_range(s: &str) -> Result<QubitRange, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad qubit count {t:?}: {e}"));
    let ns: Vec<usize> = match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            (lo..=hi).collect()
        }
        None => vec![parse(s)?],
    };
    Ok(QubitRange(ns))
}
