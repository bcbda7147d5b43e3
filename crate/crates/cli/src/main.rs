mod args;
mod commands;
mod error;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;
use error::{CliError, CliResult};

const THREADS_VAR: &str = "BLOCHAPPROX_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn run(cli: Cli) -> CliResult<Outcome> {
    configure_threads()?;
    match &cli.command {
        Command::Approx(a) => commands::approx(a),
        Command::Oracle(a) => commands::oracle_cmd(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Uncertainty(a) => commands::uncertainty_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::Sweep(a) => sweep::sweep(a),
    }
}

fn fail(err: CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            return fail(CliError::Validation(first.trim_start_matches("error: ").to_owned()));
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let text = if out.stdout.ends_with('\n') { out.stdout } else { out.stdout + "\n" };
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => fail(e),
    }
}
