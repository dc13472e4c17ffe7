//! Command-line front end for `negsqueeze-core`: single-state reports,
//! numerical squeeze optimization, field dumps and TOML-driven sweeps that
//! write CSV tables plus a run manifest.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use args::{Cli, Command};
use error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Report(a) => commands::report(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::FieldDump(a) => commands::field_dump(a),
        Command::Optimize(a) => commands::optimize(a),
    }
}
