//! Command-line front end: resolves a run configuration from a file plus
//! flag overrides, executes it, and writes the rendered output.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numeric or i/o failure
//! during the run, 3 validation failure.

use std::process::ExitCode;

use clap::Parser;

use fermipair::config::{parse_config_with_overrides, Format, Mode};
use fermipair::output::write_output;
use fermipair::{runner, Error};

#[derive(Parser)]
#[command(
    name = "fermipair",
    version,
    about = "Energy spectrum and pair-entanglement entropy of two trapped fermions \
             across an interaction sweep"
)]
struct Cli {
    /// Run configuration file (line-oriented key = value).
    #[arg(long)]
    config: Option<String>,

    /// Computation mode: spectrum, entanglement, toy, or validate.
    /// Overrides the config file.
    #[arg(long)]
    mode: Option<String>,

    /// Output file path; defaults to the config's `output`, else stdout.
    #[arg(long)]
    output: Option<String>,

    /// Output format: csv or json. Overrides the config file.
    #[arg(long)]
    format: Option<String>,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let config_error = |message: String| (EXIT_CONFIG, message);

    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {path}: {e}")))?,
        None => String::new(),
    };
    let mode = cli
        .mode
        .as_deref()
        .map(|s| s.parse::<Mode>())
        .transpose()
        .map_err(config_error)?;
    let format = cli
        .format
        .as_deref()
        .map(|s| s.parse::<Format>())
        .transpose()
        .map_err(config_error)?;

    let config =
        parse_config_with_overrides(&text, mode, cli.output.as_deref(), format)
            .map_err(|e| config_error(e.to_string()))?;

    let outcome = runner::execute(&config).map_err(|e| match e {
        Error::Config { .. } => config_error(e.to_string()),
        other => (EXIT_NUMERIC, other.to_string()),
    })?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    write_output(&config, &outcome.rendered)
        .map_err(|e| (EXIT_NUMERIC, e.to_string()))?;

    if outcome.failed_checks > 0 {
        Err((
            EXIT_VALIDATION,
            format!("{} validation checks failed", outcome.failed_checks),
        ))
    } else {
        Ok(0)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
