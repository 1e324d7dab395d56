//! `hsdensity`: sample, summarize and verify uniformly random density matrices.
//!
//! Exit codes: 0 success, 1 statistical failure, 2 invalid configuration,
//! 3 I/O failure.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
