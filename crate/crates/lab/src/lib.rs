//! Command-line driver for the `stbc-core` experiments. Every run writes a
//! CSV whose first line records the settings, seed and tool version.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use error::LabError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct Report {
    pub csv: String,
    pub summary: String,
    /// Where the CSV went; `None` means the caller should print it.
    pub written: Option<PathBuf>,
    pub mismatch: Option<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.mismatch.is_some() {
            3
        } else {
            0
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes the
/// CSV if `--out` was given.
pub fn run<I, T>(argv: I) -> Result<Report, LabError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = config::merge(argv.into_iter().map(Into::into).collect())?;
    let cli = args::Cli::try_parse_from(argv)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build()?;
    let outcome = pool.install(|| commands::execute(&cli))?;
    let csv = outcome.table.render(&format!("stbc-lab {VERSION} {}", cli.describe()));
    if let Some(path) = &cli.out {
        output::write_atomic(path, &csv)?;
    }
    Ok(Report { csv, summary: outcome.summary, written: cli.out.clone(), mismatch: outcome.mismatch })
}
