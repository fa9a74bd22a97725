//! Command-line front end for `sphere-casimir`.
//!
//! ```text
//! sphere-casimir force --wall-ratio 2 --z-min 2 --z-max 16 --points 200
//! sphere-casimir equilibria --config scenario.toml --format json
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical
//! non-convergence, 4 domain error. Failures print a one-line JSON record on
//! stderr.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use commands::Command;
pub use config::{RunConfig, Settings};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sphere-casimir", version, about = "Casimir force between a Drude sphere and a wall")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat TOML file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: RunConfig,
}

impl Cli {
    /// Config file first, then flags on top.
    pub fn settings(&self) -> Result<Settings, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(Settings::from(base.overlay(self.flags.clone())))
    }
}

/// Runs a parsed command line and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<(Settings, String), CliError> {
    let settings = cli.settings()?;
    let report = commands::run(cli.command, &settings)?;
    let text = report.render(&settings);
    Ok((settings, text))
}

/// Parses `args`, runs, and writes to `--out` or stdout.
pub fn main_with_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => return Err(CliError::Config(e.to_string().trim_end().to_owned())),
    };
    let (settings, text) = execute(&cli)?;
    match &settings.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}
