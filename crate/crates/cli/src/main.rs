use std::process::ExitCode;

use clap::Parser;
use torus_hopf_cli::args::Cli;
use torus_hopf_cli::error::CliError;

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let argv = match torus_hopf_cli::prepare_argv(std::env::args_os()) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match torus_hopf_cli::execute(&cli).and_then(|text| torus_hopf_cli::emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
