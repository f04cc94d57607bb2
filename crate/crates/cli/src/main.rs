//! `ultragh`: command-line access to exact ultrametric computations.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors, 3 when
//! `ugh --oracle` disagrees with the quotient scan.

mod commands;

use std::process::ExitCode;

use clap::{ColorChoice, CommandFactory, FromArgMatches};

use commands::{Cli, CliError};

fn main() -> ExitCode {
    let mut cmd = Cli::command();
    if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        cmd = cmd.color(ColorChoice::Never);
    }
    let cli = match cmd.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        // clap exits with 2 on usage errors and 0 for --help / --version
        Err(e) => e.exit(),
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::OracleMismatch { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
