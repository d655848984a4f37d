//! Command-line front end: configuration, grid commands, CSV output and the
//! verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod report;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::Config;
pub use error::CliError;
pub use report::VerificationReport;

/// Writes through `emit` to `path`, or to stdout when there is none.
pub fn with_output<F>(path: Option<&Path>, emit: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p.display(), e))?;
            let mut w = BufWriter::new(file);
            emit(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(p.display(), e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock).map_err(|e| CliError::io("stdout", e))
        }
    }
}

/// The explicit `--out`, else `[output] path`, else stdout.
pub fn output_path(cli: Option<PathBuf>, cfg: &Config) -> Option<PathBuf> {
    cli.or_else(|| cfg.output.clone())
}
