//! Command-line front end for `cpcover`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! rendered output; the binary only prints it and maps errors to exit codes.

pub mod args;
pub mod commands;
pub mod config;
pub mod render;
pub mod svg;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version`; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cpcover::Error),
}

impl CliError {
    /// 0 for help, 2 for bad input, 3 for failures on valid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        let text = e.to_string();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(text),
            ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                CliError::Usage("missing subcommand; see --help".into())
            }
            _ => {
                // first paragraph only, folded onto one line
                let head: Vec<&str> = text
                    .lines()
                    .take_while(|l| !l.trim().is_empty())
                    .map(str::trim)
                    .collect();
                let line = head.join(" ");
                let line = line.trim_start_matches("error: ");
                CliError::Usage(if line.is_empty() { "invalid arguments".into() } else { line.to_string() })
            }
        }
    }
}

/// Parses `argv` (program name first) and runs the selected command.
pub fn run<I, T>(argv: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    commands::execute(&cli.command)
}
