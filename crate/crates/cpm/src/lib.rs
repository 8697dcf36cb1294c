//! Command-line front end and file formats for `cpm-core`.
//!
//! Data goes to stdout or `--out`; the JSON header line and any summary
//! line go to stderr, so stdout stays machine-readable.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fmt;
pub mod header;
pub mod sim;
pub mod table;
pub mod weights_arg;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Moments(a) => commands::moments(a),
        Command::Rate(a) => commands::rate(a),
        Command::Compare(a) => commands::compare(a),
        Command::Aux(a) => commands::aux(a),
        Command::Graphsim(a) => commands::graphsim(a),
        Command::Bell(a) => commands::bell(a),
        Command::Identities(a) => commands::identities(a),
    }
}
