use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use divisor_maxcut_cli::formats::to_text;
use divisor_maxcut_cli::{run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse());
    match run(&config) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let CliError::Refutation { record, .. } = &err {
                print!("{}", to_text(record));
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
