//! Run configuration: line-oriented `key = value` files plus CLI overrides.
//!
//! The format is deliberately tiny: one key per line, `#` comments, and a
//! rational literal for the aspect ratio so exact values like 5/6 survive
//! the round trip into output headers. Unknown and duplicate keys are
//! errors carrying the offending line number.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// What the CLI should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Spectrum,
    Entanglement,
    Toy,
    Validate,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spectrum" => Ok(Mode::Spectrum),
            "entanglement" => Ok(Mode::Entanglement),
            "toy" => Ok(Mode::Toy),
            "validate" => Ok(Mode::Validate),
            other => Err(format!(
                "unknown mode '{other}' (expected spectrum, entanglement, toy, or validate)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Spectrum => "spectrum",
            Mode::Entanglement => "entanglement",
            Mode::Toy => "toy",
            Mode::Validate => "validate",
        })
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub lambda: f64,
    /// The literal the aspect ratio was given as ("5/6", "1", ...), echoed
    /// into output headers.
    pub lambda_text: String,
    pub r0_ratio: f64,
    /// Sweep range (lo, hi, step): the interaction parameter for spectrum
    /// and entanglement modes, the coupling ratio for toy mode.
    pub inv_as_range: (f64, f64, f64),
    pub branches: Vec<usize>,
    pub k_schedule: Vec<usize>,
    pub tol: f64,
    /// Output file; None writes to stdout.
    pub output_path: Option<String>,
    pub format: Format,
}

impl RunConfig {
    /// Sweep grid implied by `inv_as_range`, endpoints included, computed
    /// by index so step rounding never accumulates.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi, step) = self.inv_as_range;
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| lo + i as f64 * step).collect()
    }
}

const DEFAULT_LAMBDA_TEXT: &str = "1";
const DEFAULT_R0_RATIO: f64 = 0.04;
const DEFAULT_RANGE: (f64, f64, f64) = (-10.0, 10.0, 0.5);
const DEFAULT_BRANCHES: &[usize] = &[1];
const DEFAULT_K_SCHEDULE: &[usize] = &[8, 12, 16, 20];
const DEFAULT_TOL: f64 = 1e-3;

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Parses a lambda literal: either a plain number or an exact ratio "p/q".
fn parse_lambda(line: usize, text: &str) -> Result<f64> {
    let value = if let Some((num, den)) = text.split_once('/') {
        let p: f64 = num
            .trim()
            .parse()
            .map_err(|_| config_err(line, format!("bad ratio numerator in lambda '{text}'")))?;
        let q: f64 = den
            .trim()
            .parse()
            .map_err(|_| config_err(line, format!("bad ratio denominator in lambda '{text}'")))?;
        if q == 0.0 {
            return Err(config_err(line, "lambda denominator is zero"));
        }
        p / q
    } else {
        text.parse()
            .map_err(|_| config_err(line, format!("bad number for lambda: '{text}'")))?
    };
    if !(value > 0.0) || !value.is_finite() {
        return Err(config_err(line, format!("lambda must be positive, got '{text}'")));
    }
    Ok(value)
}

fn parse_number(line: usize, key: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| config_err(line, format!("bad number for {key}: '{text}'")))?;
    if !v.is_finite() {
        return Err(config_err(line, format!("{key} must be finite, got '{text}'")));
    }
    Ok(v)
}

fn parse_int_list(line: usize, key: &str, text: &str) -> Result<Vec<usize>> {
    let items: Vec<usize> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| config_err(line, format!("bad integer in {key}: '{}'", part.trim())))
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(config_err(line, format!("{key} must not be empty")));
    }
    Ok(items)
}

/// Parses config text with optional command-line overrides for mode,
/// output path, and format. Overrides win over file values; everything
/// else takes the documented default when absent.
pub fn parse_config_with_overrides(
    text: &str,
    mode_override: Option<Mode>,
    output_override: Option<&str>,
    format_override: Option<Format>,
) -> Result<RunConfig> {
    let mut mode: Option<Mode> = None;
    let mut lambda: Option<(f64, String)> = None;
    let mut r0_ratio: Option<f64> = None;
    let mut lo: Option<f64> = None;
    let mut hi: Option<f64> = None;
    let mut step: Option<f64> = None;
    let mut branches: Option<Vec<usize>> = None;
    let mut k_schedule: Option<Vec<usize>> = None;
    let mut tol: Option<f64> = None;
    let mut output_path: Option<String> = None;
    let mut format: Option<Format> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected 'key = value', got '{trimmed}'")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(config_err(line, format!("empty value for key '{key}'")));
        }

        macro_rules! set_once {
            ($slot:ident, $parsed:expr) => {{
                if $slot.is_some() {
                    return Err(config_err(line, format!("duplicate key '{key}'")));
                }
                $slot = Some($parsed);
            }};
        }

        match key {
            "mode" => set_once!(
                mode,
                value.parse::<Mode>().map_err(|e| config_err(line, e))?
            ),
            "lambda" => set_once!(lambda, (parse_lambda(line, value)?, value.to_string())),
            "r0_ratio" => set_once!(r0_ratio, parse_number(line, key, value)?),
            "lo" => set_once!(lo, parse_number(line, key, value)?),
            "hi" => set_once!(hi, parse_number(line, key, value)?),
            "step" => set_once!(step, parse_number(line, key, value)?),
            "branches" => set_once!(branches, parse_int_list(line, key, value)?),
            "k_schedule" => set_once!(k_schedule, parse_int_list(line, key, value)?),
            "tol" => set_once!(tol, parse_number(line, key, value)?),
            "output" => set_once!(output_path, value.to_string()),
            "format" => set_once!(
                format,
                value.parse::<Format>().map_err(|e| config_err(line, e))?
            ),
            other => {
                return Err(config_err(line, format!("unknown key '{other}'")));
            }
        }
    }

    let mode = mode_override
        .or(mode)
        .ok_or_else(|| config_err(0, "missing required key 'mode' (or --mode flag)"))?;
    let (lambda, lambda_text) =
        lambda.unwrap_or((1.0, DEFAULT_LAMBDA_TEXT.to_string()));
    let r0_ratio = r0_ratio.unwrap_or(DEFAULT_R0_RATIO);
    let inv_as_range = (
        lo.unwrap_or(DEFAULT_RANGE.0),
        hi.unwrap_or(DEFAULT_RANGE.1),
        step.unwrap_or(DEFAULT_RANGE.2),
    );
    let branches = branches.unwrap_or_else(|| DEFAULT_BRANCHES.to_vec());
    let k_schedule = k_schedule.unwrap_or_else(|| DEFAULT_K_SCHEDULE.to_vec());
    let tol = tol.unwrap_or(DEFAULT_TOL);
    if let Some(path) = output_override {
        output_path = Some(path.to_string());
    }
    let format = format_override.or(format).unwrap_or(Format::Csv);

    let config = RunConfig {
        mode,
        lambda,
        lambda_text,
        r0_ratio,
        inv_as_range,
        branches,
        k_schedule,
        tol,
        output_path,
        format,
    };
    validate_config(&config)?;
    Ok(config)
}

/// Parses config text alone, applying the documented defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_overrides(text, None, None, None)
}

fn validate_config(c: &RunConfig) -> Result<()> {
    let (lo, hi, step) = c.inv_as_range;
    if !(lo < hi) {
        return Err(config_err(0, format!("lo must be below hi, got lo={lo} hi={hi}")));
    }
    if !(step > 0.0) {
        return Err(config_err(0, format!("step must be positive, got {step}")));
    }
    if !(c.r0_ratio >= 0.0) {
        return Err(config_err(0, format!("r0_ratio must be nonnegative, got {}", c.r0_ratio)));
    }
    if !(c.tol > 0.0) {
        return Err(config_err(0, format!("tol must be positive, got {}", c.tol)));
    }
    if c.mode == Mode::Toy && lo < 0.0 {
        return Err(config_err(0, format!(
            "toy mode sweeps the coupling ratio, which is nonnegative; got lo={lo}"
        )));
    }
    if c.k_schedule.iter().any(|&k| k == 0 || k % 2 == 1) {
        return Err(config_err(0, format!(
            "k_schedule entries must be positive even integers, got {:?}",
            c.k_schedule
        )));
    }
    if !c.k_schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(config_err(0, format!(
            "k_schedule must be strictly increasing, got {:?}",
            c.k_schedule
        )));
    }
    Ok(())
}
