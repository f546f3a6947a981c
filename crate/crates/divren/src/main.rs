use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use divren::error::{CliError, EXIT_CONFIG};
use divren::{run_file, Command};
use serde_json::json;

/// Divergent series, Borel resummation and renormalization by extension.
#[derive(Debug, Parser)]
#[command(name = "divren", version)]
struct Cli {
    command: Command,
    /// Versioned JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(code: i32, body: serde_json::Value) -> ExitCode {
    eprintln!("{body}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(
                EXIT_CONFIG,
                json!({ "error": { "kind": "usage", "message": e.to_string().trim_end() }, "exit_code": EXIT_CONFIG }),
            )
        }
    };
    let text = match run_file(cli.command, &cli.config) {
        Ok(text) => text,
        Err(e) => return fail(e.exit_code(), e.to_json()),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| (path.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| ("<stdout>".to_string(), e)),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err((path, e)) => {
            let err = CliError::Io {
                path,
                message: e.to_string(),
            };
            fail(err.exit_code(), err.to_json())
        }
    }
}
