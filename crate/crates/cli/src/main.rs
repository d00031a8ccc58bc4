use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod descriptor;
mod error;
mod exec;
mod json;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rank(a) => commands::rank(a),
        Command::Verify(a) => commands::verify(a),
        Command::GraphSearch(a) => commands::graph_search(a),
        Command::Export(a) => commands::export(a),
        Command::Impossibility(a) => commands::impossibility(a),
        Command::AuditUnanimity(a) => commands::audit_unanimity(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
