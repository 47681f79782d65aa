mod args;
mod commands;
mod exit;
mod output;
mod record;

use std::process::ExitCode;

use clap::Parser;

use args::{CaCommand, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ca(CaCommand::Run(a)) => commands::ca::run_cmd(a),
        Command::Ca(CaCommand::Measure(a)) => commands::ca::measure_cmd(a),
        Command::Evolve(a) => commands::evolve::evolve_cmd(a),
        Command::Hierarchy(a) => commands::hierarchy::hierarchy_cmd(a),
        Command::Report(a) => commands::report::report_cmd(a),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    ExitCode::from(code as u8)
}
