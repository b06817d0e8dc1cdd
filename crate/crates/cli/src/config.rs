//! Run configuration: a flat JSON document with optional `grid`, `sweep`
//! and `output` blocks.
//!
//! ```json
//! {
//!   "scenario": "micro_micro",
//!   "omega": 1.0, "lambda_c": 0.001, "alpha": 1.0, "eta0": 0.3,
//!   "grid": { "n_steps": 2048 },
//!   "sweep": { "variable": "concurrence", "start": 0.0, "stop": 0.99, "count": 50 },
//!   "output": { "path": "phase.csv", "format": "csv" }
//! }
//! ```

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_complex::Complex64;
use rydberg_bec::{ModelParams64, Scenario};
use serde_json::{Map, Value};

use crate::CliError;

const TOP_KEYS: &[&str] = &[
    "scenario",
    "omega",
    "j_vdw",
    "omega_b",
    "chi",
    "lambda_c",
    "alpha",
    "eta0",
    "coefficients",
    "phase",
    "grid",
    "sweep",
    "output",
];
const GRID_KEYS: &[&str] = &["n_steps", "tail_tol", "phase_tol", "degeneracy_tol"];
const SWEEP_KEYS: &[&str] = &["variable", "start", "stop", "count"];
const OUTPUT_KEYS: &[&str] = &["path", "format"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Two(Scenario),
    /// Arbitrary qubit coefficients `c0..c3` on top of `|α⟩`.
    General,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Two(s) => s.name(),
            ScenarioKind::General => "general",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "micro_micro" => Ok(ScenarioKind::Two(Scenario::MicroMicro)),
            "macro_both" => Ok(ScenarioKind::Two(Scenario::MacroBoth)),
            "macro_single" => Ok(ScenarioKind::Two(Scenario::MacroSingle)),
            "general" => Ok(ScenarioKind::General),
            other => Err(CliError::Config(format!(
                "unknown scenario {other:?}; expected micro_micro, macro_both, macro_single or general"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub n_steps: usize,
    pub tail_tol: f64,
    pub phase_tol: f64,
    pub degeneracy_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_steps: 2048,
            tail_tol: 1e-12,
            phase_tol: 1e-7,
            degeneracy_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Initial concurrence; maps onto η₀ for the Bell state and onto |α|²
    /// at the special point for the hybrid states.
    Concurrence,
    Eta0,
    LambdaC,
    /// Modulus of α, keeping its phase.
    Alpha,
    JVdw,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Concurrence => "concurrence",
            SweepVariable::Eta0 => "eta0",
            SweepVariable::LambdaC => "lambda_c",
            SweepVariable::Alpha => "alpha",
            SweepVariable::JVdw => "j_vdw",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepVariable::Concurrence | SweepVariable::Alpha => "1",
            SweepVariable::Eta0 => "rad",
            SweepVariable::LambdaC | SweepVariable::JVdw => "freq",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "concurrence" => Ok(SweepVariable::Concurrence),
            "eta0" => Ok(SweepVariable::Eta0),
            "lambda_c" => Ok(SweepVariable::LambdaC),
            "alpha" => Ok(SweepVariable::Alpha),
            "j_vdw" => Ok(SweepVariable::JVdw),
            other => Err(CliError::Config(format!(
                "unknown sweep variable {other:?}; expected concurrence, eta0, lambda_c, alpha or j_vdw"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(CliError::Config(format!("unknown output format {other:?}; expected csv or tsv"))),
        }
    }

    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub params: ModelParams64,
    pub eta0: f64,
    /// Qubit coefficients in branch order `|00⟩, |11⟩, |01⟩, |10⟩`.
    pub coefficients: Option<[Complex64; 4]>,
    /// Geometric phase fed to the `witness` verb.
    pub phase: Option<f64>,
    pub grid: GridConfig,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

fn unknown_keys(map: &Map<String, Value>, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    for k in map.keys() {
        if !allowed.contains(&k.as_str()) {
            out.push(format!("{prefix}{k}"));
        }
    }
}

fn number(v: &Value, key: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| CliError::Config(format!("{key} must be a number, got {v}")))
}

fn complex(v: &Value, key: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Number(_) => Ok(Complex64::new(number(v, key)?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(number(&parts[0], key)?, number(&parts[1], key)?)),
        _ => Err(CliError::Config(format!(
            "{key} must be a number or a [re, im] pair, got {v}"
        ))),
    }
}

fn block<'a>(root: &'a Map<String, Value>, key: &str) -> Result<Option<&'a Map<String, Value>>, CliError> {
    match root.get(key) {
        None => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(v) => Err(CliError::Config(format!("{key} must be an object, got {v}"))),
    }
}

fn count(v: &Value, key: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| CliError::Config(format!("{key} must be a non-negative integer, got {v}")))
}

/// Parses and validates a configuration document, applying defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed configuration: {e}")))?;
    let root = root
        .as_object()
        .ok_or_else(|| CliError::Config("configuration must be a JSON object".into()))?;

    let mut unknown = Vec::new();
    unknown_keys(root, TOP_KEYS, "", &mut unknown);
    let grid_block = block(root, "grid")?;
    let sweep_block = block(root, "sweep")?;
    let output_block = block(root, "output")?;
    if let Some(m) = grid_block {
        unknown_keys(m, GRID_KEYS, "grid.", &mut unknown);
    }
    if let Some(m) = sweep_block {
        unknown_keys(m, SWEEP_KEYS, "sweep.", &mut unknown);
    }
    if let Some(m) = output_block {
        unknown_keys(m, OUTPUT_KEYS, "output.", &mut unknown);
    }
    if !unknown.is_empty() {
        return Err(CliError::Config(format!("unknown keys: {}", unknown.join(", "))));
    }

    let scenario = match root.get("scenario") {
        None => ScenarioKind::Two(Scenario::MicroMicro),
        Some(Value::String(s)) => ScenarioKind::parse(s)?,
        Some(v) => return Err(CliError::Config(format!("scenario must be a string, got {v}"))),
    };

    let sweep = match sweep_block {
        None => None,
        Some(m) => {
            let mut missing: Vec<&str> = SWEEP_KEYS.iter().copied().filter(|k| !m.contains_key(*k)).collect();
            missing.sort_unstable();
            if !missing.is_empty() {
                return Err(CliError::Config(format!("sweep block is missing: {}", missing.join(", "))));
            }
            let variable = match &m["variable"] {
                Value::String(s) => SweepVariable::parse(s)?,
                v => return Err(CliError::Config(format!("sweep.variable must be a string, got {v}"))),
            };
            let s = SweepConfig {
                variable,
                start: number(&m["start"], "sweep.start")?,
                stop: number(&m["stop"], "sweep.stop")?,
                count: count(&m["count"], "sweep.count")?,
            };
            if s.count == 0 {
                return Err(CliError::Config("sweep.count must be at least 1".into()));
            }
            Some(s)
        }
    };

    let derived_eta = matches!(sweep, Some(SweepConfig { variable: SweepVariable::Concurrence, .. }))
        || matches!(sweep, Some(SweepConfig { variable: SweepVariable::Eta0, .. }));
    let mut required: Vec<&str> = vec!["omega", "lambda_c", "alpha"];
    match scenario {
        ScenarioKind::Two(_) if !derived_eta => required.push("eta0"),
        ScenarioKind::General => required.push("coefficients"),
        _ => {}
    }
    let missing: BTreeSet<&str> = required.iter().copied().filter(|k| !root.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(CliError::Config(format!(
            "scenario {} requires {}; missing: {}",
            scenario.name(),
            required.join(", "),
            missing.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }

    let get = |k: &str| -> Result<f64, CliError> { root.get(k).map_or(Ok(0.0), |v| number(v, k)) };
    let params = ModelParams64::new(
        get("omega")?,
        get("j_vdw")?,
        get("omega_b")?,
        get("chi")?,
        get("lambda_c")?,
        complex(&root["alpha"], "alpha")?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let eta0 = get("eta0")?;

    let coefficients = match (scenario, root.get("coefficients")) {
        (ScenarioKind::General, Some(Value::Array(cs))) if cs.len() == 4 => {
            let mut c = [Complex64::new(0.0, 0.0); 4];
            for (i, v) in cs.iter().enumerate() {
                c[i] = complex(v, &format!("coefficients[{i}]"))?;
            }
            let sum: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if (sum - 1.0).abs() > 1e-10 {
                return Err(CliError::Config(format!(
                    "coefficients must satisfy |c0|² + |c1|² + |c2|² + |c3|² = 1; got norm {:.12} (squared {:.12})",
                    sum.sqrt(),
                    sum
                )));
            }
            Some(c)
        }
        (ScenarioKind::General, Some(v)) => {
            return Err(CliError::Config(format!(
                "coefficients must be an array of 4 entries (c0..c3 for |00⟩, |11⟩, |01⟩, |10⟩), got {v}"
            )))
        }
        (ScenarioKind::Two(s), Some(_)) => {
            return Err(CliError::Config(format!(
                "coefficients apply to the general scenario only, not {}",
                s.name()
            )))
        }
        _ => None,
    };

    let phase = root.get("phase").map(|v| number(v, "phase")).transpose()?;

    let mut grid = GridConfig::default();
    if let Some(m) = grid_block {
        if let Some(v) = m.get("n_steps") {
            grid.n_steps = count(v, "grid.n_steps")?;
        }
        if let Some(v) = m.get("tail_tol") {
            grid.tail_tol = number(v, "grid.tail_tol")?;
        }
        if let Some(v) = m.get("phase_tol") {
            grid.phase_tol = number(v, "grid.phase_tol")?;
        }
        if let Some(v) = m.get("degeneracy_tol") {
            grid.degeneracy_tol = number(v, "grid.degeneracy_tol")?;
        }
    }
    validate_grid(&grid)?;

    let mut output = OutputConfig::default();
    if let Some(m) = output_block {
        match m.get("path") {
            Some(Value::String(p)) => output.path = Some(PathBuf::from(p)),
            Some(v) => return Err(CliError::Config(format!("output.path must be a string, got {v}"))),
            None => {}
        }
        match m.get("format") {
            Some(Value::String(f)) => output.format = Format::parse(f)?,
            Some(v) => return Err(CliError::Config(format!("output.format must be a string, got {v}"))),
            None => {}
        }
    }

    let cfg = RunConfig {
        scenario,
        params,
        eta0,
        coefficients,
        phase,
        grid,
        sweep,
        output,
    };
    if let Some(s) = &cfg.sweep {
        validate_sweep(s, scenario)?;
    }
    Ok(cfg)
}

pub fn validate_grid(grid: &GridConfig) -> Result<(), CliError> {
    if grid.n_steps < 4 {
        return Err(CliError::Config(format!("grid.n_steps must be at least 4, got {}", grid.n_steps)));
    }
    for (name, v) in [
        ("tail_tol", grid.tail_tol),
        ("phase_tol", grid.phase_tol),
        ("degeneracy_tol", grid.degeneracy_tol),
    ] {
        if !(v > 0.0 && v < 1.0) {
            return Err(CliError::Config(format!("grid.{name} must lie in (0, 1), got {v}")));
        }
    }
    Ok(())
}

fn validate_sweep(s: &SweepConfig, scenario: ScenarioKind) -> Result<(), CliError> {
    if !(s.start.is_finite() && s.stop.is_finite()) {
        return Err(CliError::Config("sweep bounds must be finite".into()));
    }
    if s.variable == SweepVariable::Concurrence {
        if scenario == ScenarioKind::General {
            return Err(CliError::Config("a concurrence sweep needs one of the two-branch scenarios".into()));
        }
        let (lo, hi) = (s.start.min(s.stop), s.start.max(s.stop));
        if lo < 0.0 || hi >= 1.0 {
            return Err(CliError::Config(format!(
                "concurrence sweep must stay inside [0, 1), got [{lo}, {hi}]"
            )));
        }
    }
    if s.variable == SweepVariable::Eta0 && scenario == ScenarioKind::General {
        return Err(CliError::Config("eta0 has no meaning for the general scenario".into()));
    }
    if s.variable == SweepVariable::Alpha && s.start.min(s.stop) < 0.0 {
        return Err(CliError::Config("alpha sweep runs over the modulus and must be non-negative".into()));
    }
    Ok(())
}
