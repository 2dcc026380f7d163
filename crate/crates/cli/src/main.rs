//! `affmax`: solve, assemble and verify separable solutions from the command line.
//!
//! Exit codes: 0 on success, 2 when a verification fails, 1 on usage,
//! configuration or input errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod plot;
mod sweep;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::Status;
use config::{Cli, Command, ConfigFile};
use error::CliError;

fn run(cli: Cli) -> Result<Status, CliError> {
    let mut command = cli.command;
    if let Some(path) = cli.config.as_deref() {
        config::resolve(&mut command, ConfigFile::load(path)?);
    }
    match command {
        Command::SolvePositive(a) => commands::solve_positive(a),
        Command::SolveNegative(a) => commands::solve_negative_cmd(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Assemble(a) => commands::assemble_cmd(a),
        Command::Verify(a) => commands::verify(a),
        Command::BernsteinRadial(a) => commands::bernstein_radial(a),
        Command::Bernstein1d(a) => commands::bernstein_1d(a),
        Command::Sweep(a) => sweep::sweep(a),
        Command::PlotData(a) => plot::plot_data(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
