mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => commands::sweep(a),
        Command::Crossing(a) => commands::crossing(a),
        Command::Report(a) => commands::report(a),
        Command::Counts(a) => commands::counts(a),
        Command::Improve(a) => commands::improve(a),
        Command::Montecarlo(a) => commands::montecarlo(a),
        Command::Inequality(a) => commands::inequality(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
