//! Versioned run configuration. Every section is optional and falls back to
//! the defaults documented on its fields; unknown keys are rejected.

use std::path::PathBuf;

use divren_core::quadrature::{QuadratureConfig, Scheme};
use serde::{Deserialize, Serialize};

use crate::descriptor::{CutoffSpec, DistributionSpec, ExtensionSpec, KernelSpec, TestFunctionSpec};

/// The only `format_version` this build reads.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format_version: u32,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub series: SeriesSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub borel: BorelSection,
    #[serde(default)]
    pub saddle: SaddleSection,
    #[serde(default)]
    pub sd: SdSection,
    #[serde(default)]
    pub extend: ExtendSection,
    #[serde(default)]
    pub rgflow: RgFlowSection,
    #[serde(default)]
    pub report: ReportSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(ConfigError::from_json)?;
        if cfg.format_version != FORMAT_VERSION {
            return Err(ConfigError::field(
                "format_version",
                format!("unsupported format_version {} (expected {FORMAT_VERSION})", cfg.format_version),
            ));
        }
        cfg.quadrature
            .build()
            .map_err(|e| ConfigError::field("quadrature", e.to_string()))?;
        Ok(cfg)
    }

    pub fn minimal() -> Self {
        serde_json::from_str(&format!("{{\"format_version\":{FORMAT_VERSION}}}")).expect("defaults parse")
    }
}

/// A config problem, with position when it came from the JSON parser.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub message: String,
    pub field: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ConfigError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            field: Some(field.into()),
            line: None,
            column: None,
        }
    }

    pub fn message(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            field: None,
            line: None,
            column: None,
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        let line = (e.line() > 0).then_some(e.line());
        let column = (e.column() > 0).then_some(e.column());
        Self {
            message: e.to_string(),
            field: None,
            line,
            column,
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.field {
            Some(field) => write!(f, "{field}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    GaussKronrod,
    TanhSinh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    /// `gauss_kronrod` (default) or `tanh_sinh`.
    pub scheme: SchemeName,
    /// Default 1e-10.
    pub abs_tol: f64,
    /// Default 1e-10.
    pub rel_tol: f64,
    /// Default 500.
    pub max_subdivisions: usize,
    /// Cut radius for the toy integral; derived from `abs_tol` when absent.
    pub truncation_radius: Option<f64>,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let d = QuadratureConfig::default();
        Self {
            scheme: SchemeName::GaussKronrod,
            abs_tol: d.abs_tol,
            rel_tol: d.rel_tol,
            max_subdivisions: d.max_subdivisions,
            truncation_radius: d.truncation_radius,
        }
    }
}

impl QuadratureSection {
    pub fn build(&self) -> divren_core::error::Result<QuadratureConfig> {
        let cfg = QuadratureConfig {
            scheme: match self.scheme {
                SchemeName::GaussKronrod => Scheme::GaussKronrod,
                SchemeName::TanhSinh => Scheme::TanhSinh,
            },
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            truncation_radius: self.truncation_radius,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `series`: partial sums of the toy series at one coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesSection {
    /// Default 0.02.
    pub lambda: f64,
    /// Rows `N = 0..=max_order`; default 40.
    pub max_order: usize,
    /// Also write the coefficients as series JSON to this path.
    pub export_coefficients: Option<PathBuf>,
}

impl Default for SeriesSection {
    fn default() -> Self {
        Self {
            lambda: 0.02,
            max_order: 40,
            export_coefficients: None,
        }
    }
}

/// `sweep`: oracle, low-order partial sums and Borel sum over a λ grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Couplings in (0, 1].
    pub lambdas: Vec<f64>,
    /// Partial-sum columns `Z_1..Z_K`; default 12.
    pub partial_orders: usize,
    /// Padé orders `[L, M]`; default `[12, 12]`.
    pub pade: [usize; 2],
    /// Coefficients fed to the Borel transform; default 40.
    pub series_order: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            lambdas: vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            partial_orders: 12,
            pade: [12, 12],
            series_order: 40,
        }
    }
}

/// `borel`: one Borel–Padé sum with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BorelSection {
    /// Default 0.02.
    pub lambda: f64,
    /// Default `[12, 12]`.
    pub pade: [usize; 2],
    /// Toy-series order when no `series_file` is given; default 40.
    pub series_order: usize,
    /// Series JSON to resum instead of the toy series.
    pub series_file: Option<PathBuf>,
}

impl Default for BorelSection {
    fn default() -> Self {
        Self {
            lambda: 0.02,
            pade: [12, 12],
            series_order: 40,
            series_file: None,
        }
    }
}

/// `saddle`: saddle table at one coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaddleSection {
    /// Default 0.02.
    pub lambda: f64,
}

impl Default for SaddleSection {
    fn default() -> Self {
        Self { lambda: 0.02 }
    }
}

fn dyadic_grid() -> Vec<f64> {
    (0..=10).map(|k| 2f64.powi(-k)).collect()
}

/// Two probes that keep away from the origin, suitable for punctured kernels.
pub fn default_probes(dim: usize) -> Vec<TestFunctionSpec> {
    if dim == 1 {
        vec![
            TestFunctionSpec::mollifier(1, 1.0, 0.5),
            TestFunctionSpec::mollifier(1, -2.0, 1.0).with_prefactor(vec![1.0, 0.3]),
        ]
    } else {
        vec![TestFunctionSpec::mollifier(dim, 1.0, 0.5), TestFunctionSpec::mollifier(dim, 2.0, 1.5)]
    }
}

/// `sd`: scaling-degree estimate of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdSection {
    /// Default: punctured `1/|x|` in one dimension.
    pub distribution: DistributionSpec,
    /// Default: two probes supported away from 0.
    pub probes: Option<Vec<TestFunctionSpec>>,
    /// Default `2⁰, 2⁻¹, …, 2⁻¹⁰`.
    pub lambda_grid: Vec<f64>,
}

impl Default for SdSection {
    fn default() -> Self {
        Self {
            distribution: DistributionSpec::Regular {
                dim: 1,
                kernel: KernelSpec::PowerLaw {
                    exponent: 1.0,
                    coefficient: 1.0,
                },
                punctured: true,
            },
            probes: None,
            lambda_grid: dyadic_grid(),
        }
    }
}

/// `extend`: an extension evaluated on probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtendSection {
    /// Default: `1/|x|`, ω = 0, smoothed step at M = 1, width 1e-2.
    pub extension: ExtensionSpec,
    /// Default: a mollifier of radius 1/2 with φ(0) = 1.
    pub probes: Option<Vec<TestFunctionSpec>>,
}

impl Default for ExtendSection {
    fn default() -> Self {
        Self {
            extension: ExtensionSpec::Renormalized {
                kernel: KernelSpec::PowerLaw {
                    exponent: 1.0,
                    coefficient: 1.0,
                },
                dim: 1,
                omega: 0.0,
                cutoff: CutoffSpec::SmoothedStep { mass: 1.0, width: 1e-2 },
                counterterms: Vec::new(),
            },
            probes: None,
        }
    }
}

/// `rgflow`: the `1/|x|` extension swept over the cutoff scale M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RgFlowSection {
    /// Default `[0.25, 0.5, 1, 2, 4, 8]`; the first entry is the reference.
    pub masses: Vec<f64>,
    /// Smoothing width of the step cutoff; default 1e-3.
    pub smoothing: f64,
    /// Default: mollifier of radius 1/2 with φ(0) = 1.
    pub probe: TestFunctionSpec,
}

impl Default for RgFlowSection {
    fn default() -> Self {
        Self {
            masses: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            smoothing: 1e-3,
            probe: TestFunctionSpec::mollifier(1, 0.0, 0.5).at_origin(),
        }
    }
}

/// The three kernels the renormalization report knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKernel {
    /// `1/|x|`, n = 1
    InverseDistance,
    /// `1/r⁴`, n = 4
    InverseR4,
    /// `1/r⁶`, n = 4
    InverseR6,
}

impl ReportKernel {
    pub fn dim(self) -> usize {
        match self {
            ReportKernel::InverseDistance => 1,
            _ => 4,
        }
    }

    pub fn exponent(self) -> f64 {
        match self {
            ReportKernel::InverseDistance => 1.0,
            ReportKernel::InverseR4 => 4.0,
            ReportKernel::InverseR6 => 6.0,
        }
    }
}

/// `report`: scaling degree, counterterms, extension values, w-independence
/// and RG sweep for one kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    /// `inverse_distance` (default), `inverse_r4` or `inverse_r6`.
    pub kernel: ReportKernel,
    /// Probes for the extension values; default: mollifiers centred at 0.
    pub probes: Option<Vec<TestFunctionSpec>>,
    /// Default `[0.25, 0.5, 1, 2, 4, 8]`.
    pub masses: Vec<f64>,
    /// Smoothing width of the step cutoff; default 1e-3.
    pub smoothing: f64,
    /// Default `2⁰, …, 2⁻¹⁰`.
    pub lambda_grid: Vec<f64>,
}

impl Default for ReportSection {
    fn default() -> Self {
        Self {
            kernel: ReportKernel::InverseDistance,
            probes: None,
            masses: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            smoothing: 1e-3,
            lambda_grid: dyadic_grid(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::parse(r#"{"format_version": 1}"#).unwrap();
        assert_eq!(cfg, RunConfig::minimal());
        assert_eq!(cfg.series.lambda, 0.02);
        assert_eq!(cfg.sweep.pade, [12, 12]);
        assert_eq!(cfg.quadrature.build().unwrap(), QuadratureConfig::default());
    }

    #[test]
    fn unknown_field_reports_position() {
        let err = RunConfig::parse("{\n  \"format_version\": 1,\n  \"series\": {\"lambda\": 0.1, \"ordr\": 3}\n}").unwrap_err();
        assert!(err.message.contains("ordr"), "{}", err.message);
        assert_eq!(err.line, Some(3));
        assert!(err.column.is_some());
    }

    #[test]
    fn version_and_tolerances_checked() {
        let err = RunConfig::parse(r#"{"format_version": 2}"#).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("format_version"));
        let err = RunConfig::parse(r#"{"format_version": 1, "quadrature": {"abs_tol": -1}}"#).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("quadrature"));
        assert!(RunConfig::parse(r#"{"series": {}}"#).is_err());
        assert!(RunConfig::parse(r#"{"format_version": 1, "report": {"kernel": "inverse_r5"}}"#).is_err());
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cfg = RunConfig::minimal();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }
}
