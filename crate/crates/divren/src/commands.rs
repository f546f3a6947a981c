//! The eight subcommands. Each turns a [`RunConfig`] into the text of one
//! output file; nothing here depends on time, threads or hash order, so the
//! same config always renders the same bytes.

use std::collections::BTreeMap;

use divren_core::borel::borel_sum;
use divren_core::distribution::{
    estimate_scaling_degree, Distribution, DistributionKind, Kernel, Probe, TestFunction,
};
use divren_core::error::Error;
use divren_core::extension::{
    counterterm_dimension, extend_renormalized, w_independence_check, CutoffFunction, ExtendedDistribution, Extension,
};
use divren_core::quadrature::QuadratureConfig;
use divren_core::saddle::find_saddles;
use divren_core::series::AsymptoticSeries;
use divren_core::special::unit_sphere_area;
use divren_core::toy::z_exact;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{default_probes, ConfigError, ReportKernel, RunConfig};
use crate::descriptor::{ExtensionSpec, TestFunctionSpec};
use crate::error::CliError;
use crate::formats::{
    scaling_report_table, BorelDiagnosticsJson, Cell, CsvTable, SaddleTable, SeriesFile, SCHEMA_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    /// Partial sums of the toy series against the exact value (CSV).
    Series,
    /// Oracle, partial sums and Borel sum over a coupling grid (CSV).
    Sweep,
    /// One Borel–Padé sum with pole diagnostics (JSON).
    Borel,
    /// Saddle table and crossover orders (JSON).
    Saddle,
    /// Scaling-degree estimate (CSV).
    Sd,
    /// Extension values on probes (JSON).
    Extend,
    /// RG sweep of the 1/|x| extension over the cutoff scale (CSV).
    Rgflow,
    /// Renormalization report for one kernel (JSON).
    Report,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Series,
        Command::Sweep,
        Command::Borel,
        Command::Saddle,
        Command::Sd,
        Command::Extend,
        Command::Rgflow,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Series => "series",
            Command::Sweep => "sweep",
            Command::Borel => "borel",
            Command::Saddle => "saddle",
            Command::Sd => "sd",
            Command::Extend => "extend",
            Command::Rgflow => "rgflow",
            Command::Report => "report",
        }
    }
}

type CmdResult<T> = Result<T, CliError>;

/// Runs `cmd` and returns the rendered CSV or JSON.
pub fn run(cmd: Command, cfg: &RunConfig) -> CmdResult<String> {
    match cmd {
        Command::Series => cmd_series(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Borel => cmd_borel(cfg),
        Command::Saddle => cmd_saddle(cfg),
        Command::Sd => cmd_sd(cfg),
        Command::Extend => cmd_extend(cfg),
        Command::Rgflow => cmd_rgflow(cfg),
        Command::Report => cmd_report(cfg),
    }
}

fn metadata(cmd: Command, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), format!("divren.{}", cmd.name()).into());
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    m
}

fn json_document(cmd: Command, cfg: &RunConfig, result: impl Serialize) -> String {
    let mut doc = metadata(cmd, cfg);
    doc.insert("result".into(), serde_json::to_value(result).expect("result serializes"));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON renders");
    text.push('\n');
    text
}

fn csv_document(cmd: Command, cfg: &RunConfig, mut table: CsvTable) -> String {
    let mut meta = metadata(cmd, cfg);
    meta.append(&mut table.meta);
    table.meta = meta;
    table.render()
}

fn quadrature(cfg: &RunConfig) -> CmdResult<QuadratureConfig> {
    cfg.quadrature
        .build()
        .map_err(|e| ConfigError::field("quadrature", e.to_string()).into())
}

fn core<T>(context: &str, r: divren_core::error::Result<T>) -> CmdResult<T> {
    r.map_err(|e| CliError::from_core(context, e))
}

fn require(ok: bool, field: &str, message: &str) -> CmdResult<()> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::field(field, message).into())
    }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn write_file(path: &std::path::Path, text: &str) -> CmdResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn cmd_series(cfg: &RunConfig) -> CmdResult<String> {
    let s = &cfg.series;
    require(positive(s.lambda), "series.lambda", "λ must be positive")?;
    let q = quadrature(cfg)?;
    let toy = AsymptoticSeries::toy(s.max_order);
    let exact = core("series: z_exact", z_exact(s.lambda, &q))?;
    let mut table = CsvTable::new(vec!["N".into(), "partial_sum".into(), "abs_error".into()]);
    for n in 0..=s.max_order {
        let z = core("series: partial_sum", toy.partial_sum(s.lambda, n))?;
        table.push(vec![n.into(), z.into(), (z - exact.value).abs().into()]);
    }
    table.meta.insert("lambda".into(), s.lambda.into());
    table.meta.insert("z_exact".into(), exact.value.into());
    table.meta.insert("z_exact_error".into(), exact.error.into());
    table.meta.insert(
        "optimal_truncation".into(),
        toy.optimal_truncation(s.lambda).ok().map_or(Value::Null, Value::from),
    );
    if let Some(path) = &s.export_coefficients {
        let mut text = serde_json::to_string(&SeriesFile::from(&toy)).expect("series serializes");
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(csv_document(Command::Series, cfg, table))
}

fn cmd_sweep(cfg: &RunConfig) -> CmdResult<String> {
    let s = &cfg.sweep;
    require(!s.lambdas.is_empty(), "sweep.lambdas", "grid is empty")?;
    require(
        s.lambdas.iter().all(|&l| l > 0.0 && l <= 1.0),
        "sweep.lambdas",
        "every λ must lie in (0, 1]",
    )?;
    require(
        s.partial_orders <= s.series_order,
        "sweep.partial_orders",
        "must not exceed series_order",
    )?;
    let q = quadrature(cfg)?;
    let toy = AsymptoticSeries::toy(s.series_order);
    let mut columns = vec!["lambda".to_string(), "z_exact".to_string()];
    columns.extend((1..=s.partial_orders).map(|k| format!("z_{k}")));
    columns.push("borel_sum".into());
    let mut table = CsvTable::new(columns);
    for &lam in &s.lambdas {
        let mut row = vec![Cell::from(lam), core("sweep: z_exact", z_exact(lam, &q))?.value.into()];
        for k in 1..=s.partial_orders {
            row.push(core("sweep: partial_sum", toy.partial_sum(lam, k))?.into());
        }
        let b = core(&format!("sweep: borel_sum at λ={lam}"), borel_sum(&toy, lam, s.pade[0], s.pade[1], &q))?;
        row.push(b.value.into());
        table.push(row);
    }
    Ok(csv_document(Command::Sweep, cfg, table))
}

#[derive(Serialize)]
struct BorelResult {
    lambda: f64,
    source: &'static str,
    max_order: usize,
    value: f64,
    /// Oracle value and deviation, for the toy series only.
    z_exact: Option<f64>,
    abs_error: Option<f64>,
    diagnostics: BorelDiagnosticsJson,
}

fn cmd_borel(cfg: &RunConfig) -> CmdResult<String> {
    let b = &cfg.borel;
    require(positive(b.lambda), "borel.lambda", "λ must be positive")?;
    let q = quadrature(cfg)?;
    let (series, source) = match &b.series_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            let file: SeriesFile = serde_json::from_str(&text)
                .map_err(|e| ConfigError::field("borel.series_file", e.to_string()))?;
            (core("borel.series_file", file.to_series())?, "file")
        }
        None => (AsymptoticSeries::toy(b.series_order), "toy"),
    };
    let sum = core("borel: borel_sum", borel_sum(&series, b.lambda, b.pade[0], b.pade[1], &q))?;
    let z = match source {
        "toy" => Some(core("borel: z_exact", z_exact(b.lambda, &q))?.value),
        _ => None,
    };
    let result = BorelResult {
        lambda: b.lambda,
        source,
        max_order: series.max_order(),
        value: sum.value,
        z_exact: z,
        abs_error: z.map(|z| (sum.value - z).abs()),
        diagnostics: (&sum.diagnostics).into(),
    };
    Ok(json_document(Command::Borel, cfg, result))
}

fn cmd_saddle(cfg: &RunConfig) -> CmdResult<String> {
    let lam = cfg.saddle.lambda;
    require(positive(lam), "saddle.lambda", "λ must be positive")?;
    let q = quadrature(cfg)?;
    let table = core("saddle", SaddleTable::new(&find_saddles(), lam))?;
    let z = core("saddle: z_exact", z_exact(lam, &q))?;
    Ok(json_document(
        Command::Saddle,
        cfg,
        json!({ "table": table, "z_exact": z.value }),
    ))
}

fn build_probes(field: &str, specs: &[TestFunctionSpec]) -> CmdResult<Vec<TestFunction>> {
    specs
        .iter()
        .enumerate()
        .map(|(i, s)| core(&format!("{field}[{i}]"), s.build()))
        .collect()
}

fn cmd_sd(cfg: &RunConfig) -> CmdResult<String> {
    let s = &cfg.sd;
    let q = quadrature(cfg)?;
    let t = core("sd.distribution", s.distribution.build(&q))?;
    let specs = s.probes.clone().unwrap_or_else(|| default_probes(t.dim()));
    let probes = build_probes("sd.probes", &specs)?;
    let refs: Vec<&dyn Probe> = probes.iter().map(|p| p as &dyn Probe).collect();
    let report = core("sd", estimate_scaling_degree(&t, &refs, &s.lambda_grid, &q))?;
    Ok(csv_document(Command::Sd, cfg, scaling_report_table(&report)))
}

#[derive(Serialize)]
struct ProbeValue {
    probe: TestFunctionSpec,
    value: f64,
    /// `T₀[c_ε φ]` along the schedule, for low-sd extensions.
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon_sequence: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    last_step: Option<f64>,
}

#[derive(Serialize)]
struct CountJson {
    total: u64,
    rotation_invariant: u64,
}

fn cmd_extend(cfg: &RunConfig) -> CmdResult<String> {
    let e = &cfg.extend;
    let q = quadrature(cfg)?;
    let dim = e.extension.dim();
    let t = core("extend.extension", e.extension.build(&q))?;
    let specs = e
        .probes
        .clone()
        .unwrap_or_else(|| vec![TestFunctionSpec::mollifier(dim, 0.0, 0.5).at_origin()]);
    let probes = build_probes("extend.probes", &specs)?;
    let mut values = Vec::with_capacity(probes.len());
    for (spec, phi) in specs.iter().zip(&probes) {
        let entry = match t.kind() {
            DistributionKind::Extension(ext) => match ext.as_ref() {
                Extension::LowDegree(low) => {
                    let lim = core("extend", low.limit(phi, &q))?;
                    ProbeValue {
                        probe: spec.clone(),
                        value: lim.value,
                        epsilon_sequence: Some(lim.raw),
                        last_step: Some(lim.last_step),
                    }
                }
                Extension::Renormalized(r) => ProbeValue {
                    probe: spec.clone(),
                    value: core("extend", r.apply(phi, &q))?,
                    epsilon_sequence: None,
                    last_step: None,
                },
            },
            _ => unreachable!("extension descriptors build extensions"),
        };
        values.push(entry);
    }
    let counts = match &e.extension {
        ExtensionSpec::Renormalized { dim, omega, .. } => {
            let c = core("extend", counterterm_dimension(*dim, *omega))?;
            Some(CountJson {
                total: c.total,
                rotation_invariant: c.rotation_invariant,
            })
        }
        ExtensionSpec::LowSd { .. } => None,
    };
    Ok(json_document(
        Command::Extend,
        cfg,
        json!({ "extension": e.extension, "values": values, "counterterms": counts }),
    ))
}

/// Least-squares slope of `y` against `ln M`.
fn log_slope(masses: &[f64], values: &[f64]) -> f64 {
    let n = masses.len() as f64;
    let xs: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = values.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

struct Flow {
    values: Vec<f64>,
    phi0: f64,
    slope: f64,
}

fn sweep_masses(ext: &ExtendedDistribution, masses: &[f64], phi: &dyn Probe, q: &QuadratureConfig) -> CmdResult<Flow> {
    let mut values = Vec::with_capacity(masses.len());
    for &m in masses {
        let cutoff = core("rgflow.masses", ext.cutoff().with_mass(m))?;
        let t = core("rgflow", ext.with_cutoff(cutoff))?;
        values.push(core(&format!("rgflow at M={m}"), t.apply(phi, q))?);
    }
    Ok(Flow {
        slope: log_slope(masses, &values),
        phi0: phi.value(0.0),
        values,
    })
}

fn check_masses(field: &str, masses: &[f64]) -> CmdResult<()> {
    require(masses.len() >= 2, field, "need at least two scales")?;
    require(masses.iter().all(|&m| positive(m)), field, "scales must be positive")?;
    require(
        masses.windows(2).all(|w| w[1] > w[0]),
        field,
        "scales must be strictly increasing",
    )
}

fn cmd_rgflow(cfg: &RunConfig) -> CmdResult<String> {
    let r = &cfg.rgflow;
    check_masses("rgflow.masses", &r.masses)?;
    require(r.probe.dim == 1, "rgflow.probe", "the 1/|x| flow is one-dimensional")?;
    let q = quadrature(cfg)?;
    let phi = core("rgflow.probe", r.probe.build())?;
    let w = core("rgflow.smoothing", CutoffFunction::smoothed_step(1, r.masses[0], r.smoothing))?;
    let ext = core("rgflow", extend_renormalized(Kernel::power_law(1.0), 1, 0.0, w, BTreeMap::new()))?;
    let flow = sweep_masses(&ext, &r.masses, &phi, &q)?;
    let mut table = CsvTable::new(vec!["M".into(), "value".into(), "predicted".into(), "difference".into()]);
    let (m0, v0) = (r.masses[0], flow.values[0]);
    for (&m, &v) in r.masses.iter().zip(&flow.values) {
        let predicted = v0 + 2.0 * (m / m0).ln() * flow.phi0;
        table.push(vec![m.into(), v.into(), predicted.into(), (v - v0).into()]);
    }
    table.meta.insert("phi0".into(), flow.phi0.into());
    table.meta.insert("fitted_slope".into(), flow.slope.into());
    table.meta.insert("predicted_slope".into(), (2.0 * flow.phi0).into());
    Ok(csv_document(Command::Rgflow, cfg, table))
}

#[derive(Serialize)]
struct SdSummary {
    fitted_degree: f64,
    regression_r2: f64,
    confident: bool,
    probe_degrees: Vec<f64>,
}

#[derive(Serialize)]
struct RgRow {
    mass: f64,
    value: f64,
}

#[derive(Serialize)]
struct RgSummary {
    rows: Vec<RgRow>,
    phi0: f64,
    fitted_slope: f64,
    /// `S_{n−1} φ(0)`, the pure-log law; absent when ω > 0 adds power terms.
    predicted_slope: Option<f64>,
    slope_over_phi0: f64,
}

#[derive(Serialize)]
struct Report {
    kernel: ReportKernel,
    dim: usize,
    scaling_degree: SdSummary,
    omega_estimate: f64,
    omega: f64,
    counterterms: CountJson,
    extension: ExtensionSpec,
    values: Vec<ProbeValue>,
    w_independence_residual: f64,
    rg_flow: RgSummary,
}

/// An estimated degree within this distance of an integer is taken as it.
pub const INTEGER_SNAP: f64 = 0.1;

fn cmd_report(cfg: &RunConfig) -> CmdResult<String> {
    let r = &cfg.report;
    check_masses("report.masses", &r.masses)?;
    let q = quadrature(cfg)?;
    let n = r.kernel.dim();
    let kernel = Kernel::power_law(r.kernel.exponent());

    let t0 = core("report", Distribution::punctured(n, kernel.clone()))?;
    let sd_probes = build_probes("report", &default_probes(n))?;
    let refs: Vec<&dyn Probe> = sd_probes.iter().map(|p| p as &dyn Probe).collect();
    let sd = core("report: scaling degree", estimate_scaling_degree(&t0, &refs, &r.lambda_grid, &q))?;
    let omega_estimate = sd.fitted_degree - n as f64;
    let nearest = sd.fitted_degree.round();
    let omega = if (sd.fitted_degree - nearest).abs() <= INTEGER_SNAP {
        nearest - n as f64
    } else {
        omega_estimate
    };
    if omega < 0.0 {
        return Err(CliError::from_core(
            "report",
            Error::Precondition(format!("sd {} < n: no renormalization needed", sd.fitted_degree)),
        ));
    }
    let c = core("report", counterterm_dimension(n, omega))?;

    let w = core("report.smoothing", CutoffFunction::smoothed_step(n, r.masses[0], r.smoothing))?;
    let ext = core("report", extend_renormalized(kernel.clone(), n, omega, w.clone(), BTreeMap::new()))?;
    let specs = r.probes.clone().unwrap_or_else(|| {
        vec![
            TestFunctionSpec::mollifier(n, 0.0, 0.5).at_origin(),
            TestFunctionSpec::mollifier(n, 0.0, 0.8).with_prefactor(vec![1.0, 0.0, 0.5]),
        ]
    });
    let probes = build_probes("report.probes", &specs)?;
    let mut values = Vec::with_capacity(probes.len());
    for (spec, phi) in specs.iter().zip(&probes) {
        values.push(ProbeValue {
            probe: spec.clone(),
            value: core("report: extension", ext.apply(phi, &q))?,
            epsilon_sequence: None,
            last_step: None,
        });
    }

    // a probe vanishing to order ⌊ω⌋ at 0; radial profiles need even powers
    let order = omega.floor() as usize + 1;
    let power = if n == 1 { order } else { order + order % 2 };
    let mut prefactor = vec![0.0; power + 1];
    prefactor[power] = 1.0;
    let flat = core("report", TestFunction::mollifier(n, 0.0, 0.8))?.with_prefactor(prefactor);
    let w2 = core("report", CutoffFunction::mollifier(n, 1.5 / r.masses[0]))?;
    let residual = core(
        "report: w-independence",
        w_independence_check(&kernel, n, omega, w, w2, &flat, &q),
    )?;

    let flow = sweep_masses(&ext, &r.masses, &probes[0], &q)?;
    let predicted_slope = (omega.floor() == 0.0).then(|| unit_sphere_area(n) * flow.phi0);
    let report = Report {
        kernel: r.kernel,
        dim: n,
        scaling_degree: SdSummary {
            fitted_degree: sd.fitted_degree,
            regression_r2: sd.regression_r2,
            confident: sd.confident,
            probe_degrees: sd.probe_degrees.clone(),
        },
        omega_estimate,
        omega,
        counterterms: CountJson {
            total: c.total,
            rotation_invariant: c.rotation_invariant,
        },
        extension: ExtensionSpec::from(&ext),
        values,
        w_independence_residual: residual,
        rg_flow: RgSummary {
            rows: r
                .masses
                .iter()
                .zip(&flow.values)
                .map(|(&mass, &value)| RgRow { mass, value })
                .collect(),
            phi0: flow.phi0,
            fitted_slope: flow.slope,
            predicted_slope,
            slope_over_phi0: flow.slope / flow.phi0,
        },
    };
    Ok(json_document(Command::Report, cfg, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_slope_of_exact_law() {
        let m = [0.5, 1.0, 2.0, 4.0];
        let v: Vec<f64> = m.iter().map(|x: &f64| 3.0 + 2.0 * x.ln()).collect();
        assert!((log_slope(&m, &v) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn command_names_are_distinct() {
        let mut names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 8);
    }
}
