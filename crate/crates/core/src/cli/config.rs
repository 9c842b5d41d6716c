//! TOML run configuration.
//!
//! Every validation failure carries the line of the offending key so the
//! message can point straight at it.

use std::fmt;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::bath::{BathModel, DiscreteMode, OhmicSpectrum};
use crate::twoqubit::{PureStateAmplitudes, TwoQubitParams};

/// Amplitudes whose squared norm is off by more than this are rejected in
/// config files (and renormalised with a warning by `classify`).
pub const NORM_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub bath: RawBath,
    pub model: RawModel,
    pub state: RawState,
    pub time: RawTime,
    pub sweep: Option<RawSweep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RawBath {
    Discrete {
        modes: Vec<RawMode>,
        temperature: f64,
    },
    Ohmic {
        eta_c: f64,
        omega_c: f64,
        temperature: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMode {
    pub g: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub omega_a: f64,
    pub omega_b: f64,
    pub j: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawState {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub a3: [f64; 2],
    pub a4: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTime {
    pub t_max: f64,
    pub steps: usize,
    pub substeps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub key: String,
    pub from: f64,
    pub to: f64,
    pub count: usize,
    #[serde(default)]
    pub rates: bool,
    /// Fit window `[t0, t1]`; defaults to `[5τ_φ, 10τ_φ]` for Ohmic baths and
    /// the second half of the run otherwise.
    pub window: Option<[f64; 2]>,
}

/// Keys a sweep may vary.
pub const SWEEP_KEYS: [&str; 6] = [
    "bath.temperature",
    "bath.eta_c",
    "bath.omega_c",
    "model.omega_a",
    "model.omega_b",
    "model.j",
];

/// A validated run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub bath: BathModel,
    pub params: TwoQubitParams,
    pub state: PureStateAmplitudes,
    pub t_max: f64,
    pub steps: usize,
    pub substeps: usize,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
    pub rates: bool,
    pub window: Option<(f64, f64)>,
}

/// The parsed file together with its source text, kept for error anchoring.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub raw: RawConfig,
    text: String,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Line of `key` inside `[section]`, falling back to the section header and
/// then to the top of the file.
fn locate(text: &str, section: &str, key: &str) -> usize {
    let header = format!("[{section}]");
    let mut in_section = false;
    let mut header_line = 1;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') && !trimmed.starts_with("[[") {
            in_section = trimmed == header;
            if in_section {
                header_line = i + 1;
            }
            continue;
        }
        if in_section {
            if let Some((k, _)) = trimmed.split_once('=') {
                if k.trim() == key {
                    return i + 1;
                }
            }
        }
    }
    header_line
}

fn parse_text<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        ConfigError {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(ConfigFile {
            raw: parse_text(text)?,
            text: text.to_string(),
        })
    }

    pub fn error(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: locate(&self.text, section, key),
            column: 1,
            message: format!("{section}.{key}: {}", message.into()),
        }
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        self.validate(&self.raw)
    }

    fn validate(&self, raw: &RawConfig) -> Result<Scenario, ConfigError> {
        let bath = validate_bath(&raw.bath).map_err(|(k, m)| self.error("bath", k, m))?;
        let m = &raw.model;
        let params = TwoQubitParams::new(m.omega_a, m.omega_b, m.j)
            .map_err(|e| self.error("model", "omega_a", e.to_string()))?;
        let state = amplitudes_from_pairs([raw.state.a1, raw.state.a2, raw.state.a3, raw.state.a4])
            .map_err(|m| self.error("state", "a1", m))?;
        let t = &raw.time;
        if !(t.t_max.is_finite() && t.t_max > 0.0) {
            return Err(self.error("time", "t_max", "must be positive and finite"));
        }
        if t.steps < 2 {
            return Err(self.error("time", "steps", "must be >= 2"));
        }
        if t.substeps < 1 {
            return Err(self.error("time", "substeps", "must be >= 1"));
        }
        Ok(Scenario {
            bath,
            params,
            state: state.0,
            t_max: t.t_max,
            steps: t.steps,
            substeps: t.substeps,
        })
    }

    pub fn sweep(&self) -> Result<Option<Sweep>, ConfigError> {
        let Some(s) = &self.raw.sweep else {
            return Ok(None);
        };
        if !SWEEP_KEYS.contains(&s.key.as_str()) {
            return Err(self.error(
                "sweep",
                "key",
                format!(
                    "unknown sweep key {:?} (expected one of {})",
                    s.key,
                    SWEEP_KEYS.join(", ")
                ),
            ));
        }
        if s.count == 0 {
            return Err(self.error("sweep", "count", "must be >= 1"));
        }
        if !(s.from.is_finite() && s.to.is_finite()) {
            return Err(self.error("sweep", "from", "range must be finite"));
        }
        let values = if s.count == 1 {
            vec![s.from]
        } else {
            let step = (s.to - s.from) / (s.count - 1) as f64;
            (0..s.count).map(|i| s.from + step * i as f64).collect()
        };
        let window = match s.window {
            Some([a, b]) if !(0.0 <= a && a < b) => {
                return Err(self.error("sweep", "window", "needs 0 <= t0 < t1"));
            }
            Some([a, b]) => Some((a, b)),
            None => None,
        };
        Ok(Some(Sweep {
            key: s.key.clone(),
            values,
            rates: s.rates,
            window,
        }))
    }

    /// The scenario with the sweep key set to `value`.
    pub fn scenario_at(&self, key: &str, value: f64) -> Result<Scenario, ConfigError> {
        let mut raw = self.raw.clone();
        let slot = match (key, &mut raw.bath) {
            ("bath.temperature", RawBath::Discrete { temperature, .. })
            | ("bath.temperature", RawBath::Ohmic { temperature, .. }) => temperature,
            ("bath.eta_c", RawBath::Ohmic { eta_c, .. }) => eta_c,
            ("bath.omega_c", RawBath::Ohmic { omega_c, .. }) => omega_c,
            ("model.omega_a", _) => &mut raw.model.omega_a,
            ("model.omega_b", _) => &mut raw.model.omega_b,
            ("model.j", _) => &mut raw.model.j,
            _ => {
                return Err(self.error(
                    "sweep",
                    "key",
                    format!("{key} does not apply to this bath type"),
                ))
            }
        };
        *slot = value;
        self.validate(&raw).map_err(|e| {
            self.error(
                "sweep",
                "from",
                format!("at {key} = {value}: {}", e.message),
            )
        })
    }
}

fn validate_bath(raw: &RawBath) -> Result<BathModel, (&'static str, String)> {
    match raw {
        RawBath::Discrete { modes, temperature } => {
            let modes = modes
                .iter()
                .map(|m| DiscreteMode::new(m.g, m.omega))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(|e| ("modes", e.to_string()))?;
            BathModel::discrete(modes, *temperature).map_err(|e| ("temperature", e.to_string()))
        }
        RawBath::Ohmic {
            eta_c,
            omega_c,
            temperature,
        } => {
            let spec =
                OhmicSpectrum::new(*eta_c, *omega_c).map_err(|e| ("eta_c", e.to_string()))?;
            BathModel::ohmic(spec, *temperature).map_err(|e| ("temperature", e.to_string()))
        }
    }
}

/// Builds amplitudes from `[re, im]` pairs, renormalising when the squared
/// norm is within [`NORM_SLACK`] of one. The flag reports whether the input
/// needed more than rounding-level correction.
pub fn amplitudes_from_pairs(pairs: [[f64; 2]; 4]) -> Result<(PureStateAmplitudes, f64), String> {
    let a = pairs.map(|[re, im]| C64::new(re, im));
    if a.iter().any(|z| !z.is_finite()) {
        return Err("amplitudes must be finite".into());
    }
    let norm_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq == 0.0 {
        return Err("amplitudes are all zero".into());
    }
    if (norm_sq - 1.0).abs() > NORM_SLACK {
        return Err(format!("state is not normalized (norm^2 = {norm_sq})"));
    }
    PureStateAmplitudes::normalized(a)
        .map(|s| (s, norm_sq))
        .map_err(|e| e.to_string())
}

#[derive(Debug, Deserialize)]
struct BathOnly {
    bath: RawBath,
}

/// Reads just the `[bath]` section of a config, ignoring the rest.
pub fn load_bath(text: &str) -> Result<BathModel, ConfigError> {
    let b: BathOnly = parse_text(text)?;
    validate_bath(&b.bath).map_err(|(k, m)| ConfigError {
        line: locate(text, "bath", k),
        column: 1,
        message: format!("bath.{k}: {m}"),
    })
}

pub fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[bath]
type = "discrete"
temperature = 0.5
modes = [{ g = 0.3, omega = 0.7 }]

[model]
omega_a = 1.0
omega_b = 1.3
j = 0.2

[state]
a1 = [0.6, 0.0]
a2 = [0.0, 0.0]
a3 = [0.0, 0.0]
a4 = [0.8, 0.0]

[time]
t_max = 10.0
steps = 100
substeps = 10
"#;

    #[test]
    fn parses_reference_layout() {
        let cfg = ConfigFile::parse(GOOD).unwrap();
        let sc = cfg.scenario().unwrap();
        assert_eq!(sc.steps, 100);
        assert!(cfg.sweep().unwrap().is_none());
    }

    #[test]
    fn validation_error_points_at_key() {
        let text = GOOD.replace("steps = 100", "steps = 1");
        let err = ConfigFile::parse(&text).unwrap().scenario().unwrap_err();
        assert_eq!(err.line, 20);
        assert!(err.message.contains("time.steps"));
    }

    #[test]
    fn syntax_error_has_line() {
        let text = GOOD.replace("j = 0.2", "j = ");
        let err = ConfigFile::parse(&text).unwrap_err();
        assert_eq!(err.line, 10);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = GOOD.replace("j = 0.2", "j = 0.2\nk = 1.0");
        assert!(ConfigFile::parse(&text).is_err());
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let text = GOOD.replace("a4 = [0.8, 0.0]", "a4 = [0.9, 0.0]");
        let err = ConfigFile::parse(&text).unwrap().scenario().unwrap_err();
        assert!(err.message.contains("normalized"));
    }

    #[test]
    fn sweep_values_are_evenly_spaced() {
        let text = format!("{GOOD}\n[sweep]\nkey = \"model.j\"\nfrom = 0.0\nto = 1.0\ncount = 5\n");
        let cfg = ConfigFile::parse(&text).unwrap();
        let sweep = cfg.sweep().unwrap().unwrap();
        assert_eq!(sweep.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let sc = cfg.scenario_at("model.j", 0.75).unwrap();
        assert_eq!(sc.params.coupling_j, 0.75);
    }

    #[test]
    fn ohmic_key_on_discrete_bath_fails() {
        let text =
            format!("{GOOD}\n[sweep]\nkey = \"bath.eta_c\"\nfrom = 0.0\nto = 1.0\ncount = 2\n");
        let cfg = ConfigFile::parse(&text).unwrap();
        assert!(cfg.scenario_at("bath.eta_c", 0.1).is_err());
    }
}
