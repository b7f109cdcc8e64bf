//! `slicereg`: build slice regular power series, run geometric checks and
//! verify bounds, writing deterministic JSON reports.

mod args;
mod cmd_check;
mod cmd_report;
mod cmd_series;
mod cmd_verify;
mod config;
mod error;
mod input;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Series { op } => cmd_series::run(&cli.run, op),
        Command::Check(args) => cmd_check::run(&cli.run, args),
        Command::Verify(args) => cmd_verify::run(&cli.run, args),
        Command::Report { dir } => cmd_report::run(dir, cli.run.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::EXIT_INPUT } else { error::EXIT_PASS });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("slicereg: {e}");
            e.exit_code()
        }
    }
}
