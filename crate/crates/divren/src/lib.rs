//! Config-driven front end for `divren-core`: JSON descriptors for
//! distributions and extensions, series and diagnostics formats, CSV tables
//! with a JSON metadata line, and the `divren` command line.
//!
//! ```text
//! divren series|sweep|borel|saddle|sd|extend|rgflow|report --config <path> [--out <path>]
//! ```
//!
//! Exit status is 0 on success, 2 for configuration (and file) errors and 3
//! for numerical failures; failures print one JSON object on stderr.

pub mod commands;
pub mod config;
pub mod descriptor;
pub mod error;
pub mod formats;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use error::CliError;

/// Reads the config at `path` and runs `cmd`.
pub fn run_file(cmd: Command, path: &std::path::Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let cfg = RunConfig::parse(&text)?;
    run(cmd, &cfg)
}
