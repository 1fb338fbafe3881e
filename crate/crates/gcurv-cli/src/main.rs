//! `gcurv` — batch front end tying the library modules into reproducible
//! experiments with machine-readable reports.
//!
//! Exit-code contract:
//! * `0` — success (or a claim that failed exactly as predicted under
//!   `--expect-fail`),
//! * `2` — usage error (unknown id, bad parameter, malformed point),
//! * `3` — solver non-convergence,
//! * `4` — a verified claim failed.
//!
//! Every JSON report embeds its [`report::RunManifest`]; all numeric output
//! is deterministic, so re-running the same command line reproduces
//! bit-identical report bodies.

mod args;
mod commands;
mod report;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
