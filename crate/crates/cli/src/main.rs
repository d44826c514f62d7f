mod cli;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;

/// Exit statuses: shell pipelines can tell "searched and absent" (1) from
/// "gave up" (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// Counterexample found, relation holds, witness valid.
    Yes = 0,
    /// Property holds, relation refuted, witness invalid, search exhausted.
    No = 1,
    InputError = 2,
    Unknown = 3,
}

fn main() -> ExitCode {
    let cli = cli::Cli::parse();
    match commands::run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Exit::InputError as u8)
        }
    }
}
