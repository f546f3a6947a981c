//! On-disk formats: series JSON, diagnostics and tables, and CSV with a
//! `#`-prefixed JSON metadata line.

use divren_core::borel::{BorelDiagnostics, Pole};
use divren_core::distribution::ScalingReport;
use divren_core::error::{Error, Result};
use divren_core::quadrature::Scheme;
use divren_core::saddle::{crossover_order, leading_contribution, nonperturbative_scale, Saddle};
use divren_core::series::{AsymptoticSeries, SeriesCoefficient, Sign};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Version of every schema written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// `{"coeffs":[{"k":0,"sign":1,"log_mag":0.5724}, …]}`; zero coefficients
/// carry `sign: 0` and no `log_mag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub coeffs: Vec<CoefficientRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    pub k: usize,
    pub sign: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_mag: Option<f64>,
}

impl From<&AsymptoticSeries> for SeriesFile {
    fn from(s: &AsymptoticSeries) -> Self {
        Self {
            coeffs: s
                .coefficients()
                .iter()
                .map(|c| CoefficientRecord {
                    k: c.index,
                    sign: c.sign.as_i8(),
                    log_mag: (!c.is_zero()).then_some(c.log_magnitude),
                })
                .collect(),
        }
    }
}

impl SeriesFile {
    pub fn to_series(&self) -> Result<AsymptoticSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|r| {
                let sign = Sign::from_i8(r.sign).ok_or_else(|| Error::InvalidArgument(format!("sign {} at k={}", r.sign, r.k)))?;
                match (sign, r.log_mag) {
                    (Sign::Zero, _) => Ok(SeriesCoefficient::zero(r.k)),
                    (s, Some(l)) if l.is_finite() => Ok(SeriesCoefficient::from_log(r.k, s, l)),
                    _ => Err(Error::InvalidArgument(format!("missing or non-finite log_mag at k={}", r.k))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        AsymptoticSeries::new(coeffs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleJson {
    pub location: ComplexJson,
    pub spurious: bool,
}

impl From<&Pole> for PoleJson {
    fn from(p: &Pole) -> Self {
        Self {
            location: p.location.into(),
            spurious: p.spurious,
        }
    }
}

pub fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::GaussKronrod => "gauss_kronrod",
        Scheme::TanhSinh => "tanh_sinh",
    }
}

/// Borel–Padé diagnostics; an infinite radius is written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorelDiagnosticsJson {
    pub poles: Vec<PoleJson>,
    pub radius_estimate: Option<f64>,
    pub quadrature_error: f64,
    pub requested_order: [usize; 2],
    pub order_used: [usize; 2],
    pub scheme_used: &'static str,
}

impl From<&BorelDiagnostics> for BorelDiagnosticsJson {
    fn from(d: &BorelDiagnostics) -> Self {
        Self {
            poles: d.poles.iter().map(PoleJson::from).collect(),
            radius_estimate: d.radius_estimate.is_finite().then_some(d.radius_estimate),
            quadrature_error: d.quadrature_error,
            requested_order: [d.requested_order.0, d.requested_order.1],
            order_used: [d.order_used.0, d.order_used.1],
            scheme_used: scheme_name(d.scheme_used),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleRow {
    pub location: ComplexJson,
    pub action: ComplexJson,
    pub second_derivative: ComplexJson,
    pub on_real_contour: bool,
    /// `exp(−|S|/λ)`
    pub scale: f64,
    pub leading_contribution: ComplexJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleTable {
    pub lambda: f64,
    pub saddles: Vec<SaddleRow>,
    pub crossover: Option<CrossoverJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverJson {
    pub k_rough: f64,
    pub k_exact: f64,
}

impl SaddleTable {
    /// Crossover orders are left out for `λ ≥ 1`, where they are undefined.
    pub fn new(saddles: &[Saddle], lambda: f64) -> Result<Self> {
        let rows = saddles
            .iter()
            .map(|s| {
                Ok(SaddleRow {
                    location: s.location.into(),
                    action: s.action.into(),
                    second_derivative: s.second_derivative.into(),
                    on_real_contour: s.on_real_contour(),
                    scale: nonperturbative_scale(s, lambda),
                    leading_contribution: leading_contribution(s, lambda)?.into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let crossover = crossover_order(lambda).ok().map(|c| CrossoverJson {
            k_rough: c.k_rough,
            k_exact: c.k_exact,
        });
        Ok(Self {
            lambda,
            saddles: rows,
            crossover,
        })
    }
}

/// One CSV field; integers stay integers in the output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// CSV body preceded by `# {json}` describing schema, config and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            meta: Map::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut meta = self.meta.clone();
        meta.insert("columns".into(), Value::from(self.columns.clone()));
        let mut out = format!("# {}\n", Value::Object(meta)).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns).expect("write to Vec");
            for row in &self.rows {
                w.serialize(row).expect("write to Vec");
            }
            w.flush().expect("write to Vec");
        }
        String::from_utf8(out).expect("CSV output is UTF-8")
    }
}

/// Splits rendered CSV back into metadata and numeric rows.
pub fn parse_csv(text: &str) -> std::result::Result<(Value, Vec<String>, Vec<Vec<f64>>), String> {
    let (first, body) = text.split_once('\n').ok_or("empty CSV")?;
    let meta_text = first.strip_prefix("# ").ok_or("missing metadata line")?;
    let meta: Value = serde_json::from_str(meta_text).map_err(|e| e.to_string())?;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let columns = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(rec.iter().map(|f| f.parse::<f64>().map_err(|e| e.to_string())).collect::<std::result::Result<Vec<_>, _>>()?);
    }
    Ok((meta, columns, rows))
}

/// `λ` followed by one column per probe.
pub fn scaling_report_table(report: &ScalingReport) -> CsvTable {
    let mut columns = vec!["lambda".to_string()];
    columns.extend((0..report.samples.len()).map(|p| format!("probe_{p}")));
    let mut table = CsvTable::new(columns);
    for (i, &lam) in report.lambda_grid.iter().enumerate() {
        let mut row = vec![Cell::from(lam)];
        row.extend(report.samples.iter().map(|s| Cell::from(s[i])));
        table.push(row);
    }
    let m = &mut table.meta;
    m.insert("fitted_degree".into(), report.fitted_degree.into());
    m.insert("regression_r2".into(), report.regression_r2.into());
    m.insert("confident".into(), report.confident.into());
    m.insert("probe_count".into(), report.probe_count.into());
    m.insert("exact".into(), report.exact.into());
    m.insert("probe_degrees".into(), Value::from(report.probe_degrees.clone()));
    m.insert("probe_r2".into(), Value::from(report.probe_r2.clone()));
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_file_roundtrip() {
        let s = AsymptoticSeries::from_values(&[1.0, 0.0, -2.5, 1e-300]).unwrap();
        let file = SeriesFile::from(&s);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.starts_with(r#"{"coeffs":[{"k":0,"sign":1,"log_mag":0.0},{"k":1,"sign":0},"#));
        let back: SeriesFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }

    #[test]
    fn series_file_rejects_bad_records() {
        let bad_sign: SeriesFile = serde_json::from_str(r#"{"coeffs":[{"k":0,"sign":2,"log_mag":0}]}"#).unwrap();
        assert!(bad_sign.to_series().is_err());
        let gap: SeriesFile = serde_json::from_str(r#"{"coeffs":[{"k":1,"sign":1,"log_mag":0}]}"#).unwrap();
        assert!(gap.to_series().is_err());
        let missing: SeriesFile = serde_json::from_str(r#"{"coeffs":[{"k":0,"sign":-1}]}"#).unwrap();
        assert!(missing.to_series().is_err());
    }

    #[test]
    fn csv_roundtrip_with_metadata() {
        let mut t = CsvTable::new(vec!["N".into(), "value".into()]);
        t.meta.insert("schema".into(), "demo".into());
        t.push(vec![0usize.into(), 1.5.into()]);
        t.push(vec![1usize.into(), 1e-300.into()]);
        let text = t.render();
        assert_eq!(text, "# {\"columns\":[\"N\",\"value\"],\"schema\":\"demo\"}\nN,value\n0,1.5\n1,1e-300\n");
        let (meta, cols, rows) = parse_csv(&text).unwrap();
        assert_eq!(meta["schema"], "demo");
        assert_eq!(cols, vec!["N", "value"]);
        assert_eq!(rows[1], vec![1.0, 1e-300]);
    }
}
