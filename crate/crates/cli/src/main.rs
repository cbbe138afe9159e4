mod args;
mod commands;
mod output;
mod source;

use std::process::ExitCode;

use clap::Parser;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESIDUAL: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: EXIT_INTERNAL, message: message.into() }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self::internal(e.to_string())
    }

    /// Library errors are caused by the inputs except for numerical breakdown.
    pub fn from_core(e: dqc1lab::Error) -> Self {
        match e {
            dqc1lab::Error::Numeric(_) => Self::internal(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let code = match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code as u8)
}
