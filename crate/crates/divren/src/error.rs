//! Command failures, their exit codes and their JSON form on stderr.

use divren_core::error::Error;
use serde_json::{json, Value};

use crate::config::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable, malformed or out-of-range configuration.
    Config(ConfigError),
    /// A well-formed request that failed numerically.
    Numerical { context: String, error: Error },
    /// Reading the config or writing an output file failed.
    Io { path: String, message: String },
}

impl CliError {
    /// Sorts a core error: rejections of the requested object are config
    /// errors, failures to reach a tolerance or a verdict are numerical.
    pub fn from_core(context: impl Into<String>, error: Error) -> Self {
        let context = context.into();
        match error {
            Error::InvalidArgument(_)
            | Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::OutOfRange { .. }
            | Error::NotLocallyIntegrable
            | Error::DimensionMismatch { .. }
            | Error::PunctureViolation => CliError::Config(ConfigError::field(&context, error.to_string())),
            error => CliError::Numerical { context, error },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Numerical { .. } => EXIT_NUMERICAL,
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Config(e) => json!({
                "kind": "config",
                "message": e.message,
                "field": e.field,
                "line": e.line,
                "column": e.column,
            }),
            CliError::Io { path, message } => json!({
                "kind": "io",
                "message": message,
                "path": path,
            }),
            CliError::Numerical { context, error } => {
                let mut v = json!({
                    "kind": "numerical",
                    "code": code(error),
                    "context": context,
                    "message": error.to_string(),
                });
                if let Some(data) = details(error) {
                    v["data"] = data;
                }
                v
            }
        };
        json!({ "error": body, "exit_code": self.exit_code() })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Numerical { context, error } => write!(f, "{context}: {error}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

fn code(e: &Error) -> &'static str {
    match e {
        Error::OutOfRange { .. } => "out_of_range",
        Error::NoLocalMinimum { .. } => "no_local_minimum",
        Error::Quadrature { .. } => "quadrature",
        Error::PadeDegenerate => "pade_degenerate",
        Error::NonBorelSummable { .. } => "non_borel_summable",
        Error::DegenerateSaddle { .. } => "degenerate_saddle",
        Error::PunctureViolation => "puncture_violation",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotLocallyIntegrable => "not_locally_integrable",
        Error::Inconclusive { .. } => "inconclusive",
        Error::NonConvergence { .. } => "non_convergence",
        Error::DerivativeUnavailable { .. } => "derivative_unavailable",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
    }
}

fn details(e: &Error) -> Option<Value> {
    Some(match e {
        Error::Quadrature {
            value,
            error,
            subdivisions,
        } => json!({ "value": value, "error": error, "subdivisions": subdivisions }),
        Error::NonBorelSummable { pole } => json!({ "pole": { "re": pole.re, "im": pole.im } }),
        Error::Inconclusive { best_r2, samples } => json!({ "best_r2": best_r2, "samples": samples }),
        Error::NonConvergence { last_step, sequence } => json!({ "last_step": last_step, "sequence": sequence }),
        Error::NoLocalMinimum { scanned } => json!({ "scanned": scanned }),
        _ => return None,
    })
}
