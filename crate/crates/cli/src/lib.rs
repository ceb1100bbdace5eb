//! Command-line front end of `torus-hopf`: configuration, dispatch and CSV/JSON
//! reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod report;

use std::ffi::OsString;

use args::{Cli, Command};
use error::CliError;
use output::render;

/// Runs a parsed command and returns the rendered report.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let out = cli.command.output();
    let run = || {
        let f = out.format;
        match &cli.command {
            Command::Spectrum(a) => render(&commands::spectrum(a)?, f),
            Command::Catalog(a) => render(&commands::catalog(a)?, f),
            Command::Stability(a) => render(&commands::stability(a)?, f),
            Command::Simulate(a) => render(&commands::simulate(a)?, f),
            Command::Orbit(a) => render(&commands::orbit(a)?, f),
            Command::Trace(a) => render(&commands::trace(a)?, f),
            Command::Verify(a) => render(&commands::verify(a)?, f),
            Command::Existence(a) => render(&commands::existence(a)?, f),
        }
    };
    match out.workers {
        Some(0) => Err(CliError::config("workers must be at least 1")),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::io(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Writes the report to `--output` or stdout.
pub fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match &cli.command.output().output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io(e.to_string())),
    }
}

/// `argv` with any `--config` file expanded.
pub fn prepare_argv(argv: impl IntoIterator<Item = impl Into<OsString>>) -> Result<Vec<OsString>, CliError> {
    config::expand_argv(argv.into_iter().map(Into::into).collect())
}
