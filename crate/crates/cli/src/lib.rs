//! Library half of the `incrrelay` binary, split out for testing.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use std::io::Write;

use args::{Cli, Command};
use error::CliResult;

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let settings = commands::settings_from_env()?;
    match &cli.command {
        Command::Characteristic(a) => commands::characteristic(a, &settings, stdout).map(|_| ()),
        Command::Simulate(a) => commands::simulate_cmd(a, &settings, stdout),
        Command::Verify(a) => commands::verify(a, &settings, stdout).map(|_| ()),
    }
}
