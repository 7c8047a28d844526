mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use condsolv::io::OutputRecord;

use crate::config::{Cli, CliConfig};

/// Bad flags, a bad config file, or parameters outside the model's domain.
#[derive(Debug)]
pub struct UsageError(pub String);

const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn emit(record: &OutputRecord, config: &CliConfig) -> condsolv::Result<()> {
    let text = record.render(config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|source| condsolv::Error::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| condsolv::Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn usage(message: &str) -> ExitCode {
    eprintln!("error: {message}\n\nRun `condsolv --help` for usage.");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = match CliConfig::from_cli(cli).and_then(|c| c.validate().map(|_| c)) {
        Ok(config) => config,
        Err(UsageError(message)) => return usage(&message),
    };

    let outcome = match commands::run(&config.command) {
        Ok(outcome) => outcome,
        Err(condsolv::Error::InvalidParameter(message)) => return usage(&message),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    if let Err(e) = emit(&outcome.record, &config) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_NUMERIC);
    }
    match outcome.failure {
        Some(reason) => {
            eprintln!("error: {reason}");
            ExitCode::from(EXIT_NUMERIC)
        }
        None => ExitCode::SUCCESS,
    }
}
