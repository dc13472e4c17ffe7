use std::process::ExitCode;

use clap::Parser;
use negsqueeze::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match negsqueeze::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code())
        }
    }
}
