mod args;
mod bench;
mod commands;
mod record;

use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

/// A failed run and the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const TABLE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NUMERIC: u8 = 3;

    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: Self::USAGE,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError {
            code: Self::NUMERIC,
            message: message.into(),
        }
    }
}

impl From<noncentral_t::NctError> for CliError {
    fn from(e: noncentral_t::NctError) -> Self {
        CliError::numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let status = commands::run(cli, &mut out);
    // a closed pipe is not worth a diagnostic
    let _ = out.flush();
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("nct: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
