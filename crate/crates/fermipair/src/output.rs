//! Deterministic rendering of sweep results to CSV or JSON.
//!
//! Every output begins with a header echoing the fully resolved
//! configuration and the crate version, so a data file is traceable to the
//! run that produced it. Rows are sorted and floats serialized with a
//! fixed 12-significant-digit format; rendering the same configuration
//! twice yields byte-identical text.

use std::io::Write as _;

use serde_json::json;

use crate::config::{Format, RunConfig};
use crate::error::{Error, Result};
use crate::validate::CheckResult;

/// One energy-spectrum sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub inv_as: f64,
    pub branch: usize,
    pub x: f64,
    pub beta2: f64,
}

/// One entanglement sample: the entropy estimate at the largest truncation
/// reached by the convergence ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementRow {
    pub inv_as: f64,
    pub branch: usize,
    pub k: usize,
    pub spatial_entropy: f64,
    pub total_entropy: f64,
    pub converged: bool,
}

/// One toy-model sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyRow {
    pub g_over_gap: f64,
    pub entropy: f64,
}

/// Result rows of one run, by mode.
#[derive(Debug, Clone, PartialEq)]
pub enum TableData {
    Spectrum(Vec<SpectrumRow>),
    Entanglement(Vec<EntanglementRow>),
    Toy(Vec<ToyRow>),
}

/// Fixed-width float serialization: 12 significant digits, exponent form.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// The same value rounded to the serialized precision, for JSON number
/// fields.
fn round12(v: f64) -> f64 {
    fmt_float(v).parse().expect("formatted float reparses")
}

/// Header key-value pairs describing a resolved config. The output path is
/// deliberately omitted so the bytes do not depend on where they land.
fn header_pairs(c: &RunConfig) -> Vec<(&'static str, String)> {
    let (lo, hi, step) = c.inv_as_range;
    let join = |xs: &[usize]| {
        xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    };
    vec![
        ("mode", c.mode.to_string()),
        ("lambda", c.lambda_text.clone()),
        ("r0_ratio", c.r0_ratio.to_string()),
        ("lo", lo.to_string()),
        ("hi", hi.to_string()),
        ("step", step.to_string()),
        ("branches", join(&c.branches)),
        ("k_schedule", join(&c.k_schedule)),
        ("tol", c.tol.to_string()),
        ("format", c.format.to_string()),
    ]
}

/// Comment header for text outputs; each line after the first is a valid
/// config line, so a header can be replayed as a config.
pub fn header_lines(c: &RunConfig) -> Vec<String> {
    let mut lines = vec![format!("# fermipair {}", crate::VERSION)];
    for (key, value) in header_pairs(c) {
        lines.push(format!("# {key} = {value}"));
    }
    lines
}

fn sorted_table(data: &TableData) -> TableData {
    let mut data = data.clone();
    match &mut data {
        TableData::Spectrum(rows) => rows.sort_by(|a, b| {
            (a.branch, a.inv_as)
                .partial_cmp(&(b.branch, b.inv_as))
                .expect("finite sort keys")
        }),
        TableData::Entanglement(rows) => rows.sort_by(|a, b| {
            (a.branch, a.inv_as)
                .partial_cmp(&(b.branch, b.inv_as))
                .expect("finite sort keys")
        }),
        TableData::Toy(rows) => {
            rows.sort_by(|a, b| a.g_over_gap.total_cmp(&b.g_over_gap))
        }
    }
    data
}

fn columns(data: &TableData) -> &'static [&'static str] {
    match data {
        TableData::Spectrum(_) => &["inv_as", "branch", "x", "beta2"],
        TableData::Entanglement(_) => {
            &["inv_as", "branch", "K", "spatial_entropy", "total_entropy", "converged"]
        }
        TableData::Toy(_) => &["g_over_gap", "entropy"],
    }
}

fn render_csv(c: &RunConfig, data: &TableData) -> String {
    let mut out = String::new();
    for line in header_lines(c) {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&columns(data).join(","));
    out.push('\n');
    match data {
        TableData::Spectrum(rows) => {
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_float(r.inv_as),
                    r.branch,
                    fmt_float(r.x),
                    fmt_float(r.beta2)
                ));
            }
        }
        TableData::Entanglement(rows) => {
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_float(r.inv_as),
                    r.branch,
                    r.k,
                    fmt_float(r.spatial_entropy),
                    fmt_float(r.total_entropy),
                    r.converged
                ));
            }
        }
        TableData::Toy(rows) => {
            for r in rows {
                out.push_str(&format!(
                    "{},{}\n",
                    fmt_float(r.g_over_gap),
                    fmt_float(r.entropy)
                ));
            }
        }
    }
    out
}

fn render_json(c: &RunConfig, data: &TableData) -> String {
    let header: serde_json::Map<String, serde_json::Value> =
        std::iter::once(("version".to_string(), json!(crate::VERSION)))
            .chain(header_pairs(c).into_iter().map(|(k, v)| (k.to_string(), json!(v))))
            .collect();
    let rows: Vec<serde_json::Value> = match data {
        TableData::Spectrum(rows) => rows
            .iter()
            .map(|r| json!([round12(r.inv_as), r.branch, round12(r.x), round12(r.beta2)]))
            .collect(),
        TableData::Entanglement(rows) => rows
            .iter()
            .map(|r| {
                json!([
                    round12(r.inv_as),
                    r.branch,
                    r.k,
                    round12(r.spatial_entropy),
                    round12(r.total_entropy),
                    r.converged
                ])
            })
            .collect(),
        TableData::Toy(rows) => rows
            .iter()
            .map(|r| json!([round12(r.g_over_gap), round12(r.entropy)]))
            .collect(),
    };
    let doc = json!({
        "header": header,
        "columns": columns(data),
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("static structure serializes");
    text.push('\n');
    text
}

/// Renders one table in the configured format, sorted rows, trailing
/// newline.
pub fn render(c: &RunConfig, data: &TableData) -> String {
    let sorted = sorted_table(data);
    match c.format {
        Format::Csv => render_csv(c, &sorted),
        Format::Json => render_json(c, &sorted),
    }
}

/// Renders a validation report as plain text: the config header followed
/// by one pass/fail line per check.
pub fn render_report(c: &RunConfig, results: &[CheckResult]) -> String {
    let mut out = String::new();
    for line in header_lines(c) {
        out.push_str(&line);
        out.push('\n');
    }
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {}: {}\n", r.name, r.detail));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!(
        "{} of {} checks passed\n",
        results.len() - failed,
        results.len()
    ));
    out
}

/// Writes rendered text to the configured destination: a file when
/// `output_path` is set, stdout otherwise.
pub fn write_output(c: &RunConfig, rendered: &str) -> Result<()> {
    match &c.output_path {
        Some(path) => std::fs::write(path, rendered).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes())
                .and_then(|()| lock.flush())
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })
        }
    }
}
