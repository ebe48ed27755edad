//! Run configuration: defaults, overridden by an optional `key=value` config
//! file, overridden by explicit flags.

use entroq::{tol, SolverOptions};
use std::fmt;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn parse(value: &str) -> Result<Self, String> {
        match value {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Tolerances and defaults shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub tol_entropy: f64,
    pub tol_gap: f64,
    pub tol_feas: f64,
    pub k_max: u32,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol_entropy: tol::ENTROPY,
            tol_gap: tol::GAP,
            tol_feas: tol::FEASIBILITY,
            k_max: 5,
            seed: 42,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    /// Applies a config file's `key=value` lines over the defaults. Blank
    /// lines and `#` comments are ignored; unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|err| format!("cannot read config {}: {err}", path.display()))?;
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", line_no + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_f64 = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| format!("line {}: {key} expects a number", line_no + 1))
            };
            match key {
                "tol_entropy" => self.tol_entropy = parse_f64(value)?,
                "tol_gap" => self.tol_gap = parse_f64(value)?,
                "tol_feas" => self.tol_feas = parse_f64(value)?,
                "k_max" => {
                    self.k_max = value
                        .parse()
                        .map_err(|_| format!("line {}: k_max expects an integer", line_no + 1))?
                }
                "seed" => {
                    self.seed = value
                        .parse()
                        .map_err(|_| format!("line {}: seed expects an integer", line_no + 1))?
                }
                "format" => self.format = OutputFormat::parse(value)?,
                other => return Err(format!("line {}: unknown key {other:?}", line_no + 1)),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol_entropy > 0.0) || !(self.tol_gap > 0.0) || !(self.tol_feas > 0.0) {
            return Err("tolerances must be positive".into());
        }
        if self.k_max == 0 {
            return Err("k_max must be at least 1".into());
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            gap_tol: self.tol_gap,
            feas_tol: self.tol_feas,
            ..SolverOptions::default()
        }
    }

    pub fn oracle_options(&self) -> entroq::oracle::OracleOptions {
        entroq::oracle::OracleOptions {
            entropy_tol: self.tol_entropy,
            solver: self.solver_options(),
        }
    }
}

/// Parses one component of `--r`: a decimal, or the exact tokens `1/sqrt3`
/// and `-1/sqrt3` used by the worked example.
pub fn parse_component(token: &str) -> Result<f64, String> {
    let token = token.trim();
    match token {
        "1/sqrt3" => Ok(1.0 / 3.0f64.sqrt()),
        "-1/sqrt3" => Ok(-1.0 / 3.0f64.sqrt()),
        _ => token
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {token:?} as a number")),
    }
}

/// Parses `--r x,y,z`.
pub fn parse_bloch(text: &str) -> Result<entroq::BlochVector, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated components, found {}",
            parts.len()
        ));
    }
    let r1 = parse_component(parts[0])?;
    let r2 = parse_component(parts[1])?;
    let r3 = parse_component(parts[2])?;
    Ok(entroq::BlochVector::new(r1, r2, r3))
}
