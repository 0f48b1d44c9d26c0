//! Experiment configuration: a flat `key = value` text format with dotted keys.
//!
//! ```text
//! # reference link, HD-DF with time switching
//! system.ps_watts = 1.0
//! system.ch1.sigma_db = 2
//! scenario.relay = df
//! scenario.eh = tsr
//! scenario.tau = 0.5
//! sweep.axis = tau
//! sweep.values = 0.1:0.1:0.9
//! mc.trials = 1000000
//! ```
//!
//! Later assignments win, so command-line overrides are applied after the file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use relay_outage::model::{Duplex, Harvesting, Relaying, Scenario, SystemConfig};
use relay_outage::montecarlo::McPlan;
use relay_outage::OutageError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: Origin, key: String },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        origin: Origin,
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration: `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

/// Where an assignment came from, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => write!(f, "override"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Tau,
    Rho,
    Cth,
    D1,
    SigmaDb,
    Ps,
    SigmaGDb,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Tau => "tau",
            SweepAxis::Rho => "rho",
            SweepAxis::Cth => "cth",
            SweepAxis::D1 => "d1",
            SweepAxis::SigmaDb => "sigma_db",
            SweepAxis::Ps => "ps",
            SweepAxis::SigmaGDb => "sigma_g_db",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tau" => SweepAxis::Tau,
            "rho" => SweepAxis::Rho,
            "cth" => SweepAxis::Cth,
            "d1" => SweepAxis::D1,
            "sigma_db" => SweepAxis::SigmaDb,
            "ps" => SweepAxis::Ps,
            "sigma_g_db" => SweepAxis::SigmaGDb,
            _ => return Err("expected one of tau, rho, cth, d1, sigma_db, ps, sigma_g_db".into()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Fixed `d1 + d2` for a `d1` sweep; `d2` follows as the remainder.
    pub total_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err("expected csv or json".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub scenario: Scenario,
    pub sweep: Option<Sweep>,
    /// `None` disables the Monte Carlo column.
    pub mc: Option<McPlan>,
    pub output: OutputSpec,
}

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20_170_901;

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            scenario: Scenario::hd(
                Relaying::DecodeForward,
                Harvesting::TimeSwitching { tau: 0.5 },
            ),
            sweep: None,
            mc: Some(McPlan::new(DEFAULT_TRIALS, DEFAULT_SEED)),
            output: OutputSpec::default(),
        }
    }
}

/// Raw scenario fields; the protocol parameter is kept even when the
/// current protocol does not use it, so assignment order does not matter.
#[derive(Debug, Clone, Copy)]
struct ScenarioDraft {
    duplex: Duplex,
    relay: Relaying,
    eh: &'static str,
    tau: f64,
    rho: f64,
    pc_fraction: f64,
}

/// Incremental builder that accepts assignments in any order.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    system: SystemConfig,
    scenario: ScenarioDraft,
    sweep_axis: Option<SweepAxis>,
    sweep_values: Vec<f64>,
    sweep_total: Option<f64>,
    mc_enabled: bool,
    plan: McPlan,
    output: OutputSpec,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            scenario: ScenarioDraft {
                duplex: Duplex::Half,
                relay: Relaying::DecodeForward,
                eh: "tsr",
                tau: 0.5,
                rho: 0.5,
                pc_fraction: 0.0,
            },
            sweep_axis: None,
            sweep_values: Vec::new(),
            sweep_total: None,
            mc_enabled: true,
            plan: McPlan::new(DEFAULT_TRIALS, DEFAULT_SEED),
            output: OutputSpec::default(),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| "expected a finite number".to_string())
}

fn parse_u64(s: &str) -> Result<u64, String> {
    let cleaned: String = s.chars().filter(|&c| c != '_').collect();
    if let Ok(v) = cleaned.parse::<u64>() {
        return Ok(v);
    }
    // accept 1e6-style integers
    match cleaned.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err("expected a non-negative integer".into()),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err("expected true or false".into()),
    }
}

/// Parses `a,b,c` or an inclusive range `start:step:stop`.
pub fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let (start, step, stop) = (
            parse_f64(parts[0])?,
            parse_f64(parts[1])?,
            parse_f64(parts[2])?,
        );
        if step <= 0.0 || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // round to suppress accumulated representation error in labels
        return Ok((0..=n)
            .map(|i| ((start + step * i as f64) * 1e12).round() / 1e12)
            .collect());
    }
    let values: Result<Vec<f64>, String> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_f64)
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err("expected at least one value".into());
    }
    Ok(values)
}

impl ConfigBuilder {
    /// Assigns one key.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let invalid = |reason: String| ConfigError::InvalidValue {
            origin,
            key: key.to_string(),
            value: value.to_string(),
            reason,
        };
        let num = || parse_f64(value).map_err(invalid);
        let sys = &mut self.system;
        match key {
            "system.ps_watts" => sys.ps_watts = num()?,
            "system.eta" => sys.eta = num()?,
            "system.path_loss_exp" => sys.path_loss_exp = num()?,
            "system.d1_m" => sys.d1_m = num()?,
            "system.d2_m" => sys.d2_m = num()?,
            "system.sigma_a2_w" => sys.sigma_a2_w = num()?,
            "system.sigma_c2_w" => sys.sigma_c2_w = num()?,
            "system.sigma_d2_w" => sys.sigma_d2_w = num()?,
            "system.cth" => sys.cth = num()?,
            "system.ch1.mu_db" => sys.ch1.mu_db = num()?,
            "system.ch1.sigma_db" => sys.ch1.sigma_db = num()?,
            "system.ch2.mu_db" => sys.ch2.mu_db = num()?,
            "system.ch2.sigma_db" => sys.ch2.sigma_db = num()?,
            "system.chg.mu_db" => sys.chg.mu_db = num()?,
            "system.chg.sigma_db" => sys.chg.sigma_db = num()?,
            "scenario.duplex" => {
                self.scenario.duplex = match value {
                    "hd" | "half" => Duplex::Half,
                    "fd" | "full" => Duplex::Full,
                    _ => return Err(invalid("expected hd or fd".into())),
                }
            }
            "scenario.relay" => {
                self.scenario.relay = match value {
                    "df" => Relaying::DecodeForward,
                    "af" => Relaying::AmplifyForward,
                    _ => return Err(invalid("expected df or af".into())),
                }
            }
            "scenario.eh" => {
                self.scenario.eh = match value {
                    "tsr" => "tsr",
                    "psr" => "psr",
                    "irr" => "irr",
                    _ => return Err(invalid("expected tsr, psr or irr".into())),
                }
            }
            "scenario.tau" => self.scenario.tau = num()?,
            "scenario.rho" => self.scenario.rho = num()?,
            "scenario.pc_fraction" => self.scenario.pc_fraction = num()?,
            "sweep.axis" => self.sweep_axis = Some(value.parse().map_err(invalid)?),
            "sweep.values" => self.sweep_values = parse_values(value).map_err(invalid)?,
            "sweep.total_m" => self.sweep_total = Some(num()?),
            "mc.enabled" => self.mc_enabled = parse_bool(value).map_err(invalid)?,
            "mc.trials" => self.plan.trials = parse_u64(value).map_err(invalid)?,
            "mc.seed" => self.plan.seed = parse_u64(value).map_err(invalid)?,
            "mc.block_size" => self.plan.block_size = parse_u64(value).map_err(invalid)?,
            "output.path" => self.output.path = Some(PathBuf::from(value)),
            "output.format" => self.output.format = value.parse().map_err(invalid)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies every assignment in `text`. `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.trim().to_string(),
            })?;
            self.set(key.trim(), value.trim(), Origin::Line(i + 1))?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| ConfigError::InvalidValue {
                origin: Origin::Override,
                key: kv.to_string(),
                value: String::new(),
                reason: "expected key=value".into(),
            })?;
        self.set(key.trim(), value.trim(), Origin::Override)
    }

    pub fn build(&self) -> Result<ExperimentConfig, ConfigError> {
        let d = self.scenario;
        let eh = match d.eh {
            "tsr" => Harvesting::TimeSwitching { tau: d.tau },
            "psr" => Harvesting::PowerSplitting { rho: d.rho },
            _ => Harvesting::Ideal,
        };
        let scenario = Scenario {
            duplex: d.duplex,
            relay: d.relay,
            eh,
            pc_fraction: d.pc_fraction,
        };
        self.system.validate().map_err(to_config_error)?;
        scenario.validate().map_err(to_config_error)?;

        let sweep = match self.sweep_axis {
            None => None,
            Some(axis) => {
                if self.sweep_values.is_empty() {
                    return Err(invalid("sweep.values", "a sweep needs at least one value"));
                }
                let sweep = Sweep {
                    axis,
                    values: self.sweep_values.clone(),
                    total_m: self.sweep_total,
                };
                check_sweep(&sweep, &scenario)?;
                Some(sweep)
            }
        };
        let mc = if self.mc_enabled {
            self.plan.validate().map_err(to_config_error)?;
            Some(self.plan)
        } else {
            None
        };
        Ok(ExperimentConfig {
            system: self.system,
            scenario,
            sweep,
            mc,
            output: self.output.clone(),
        })
    }
}

fn invalid(key: &str, reason: &str) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

/// Maps a library domain error onto the configuration key that caused it.
pub fn to_config_error(e: OutageError) -> ConfigError {
    match e {
        OutageError::Domain {
            field,
            value,
            reason,
        } => ConfigError::Invalid {
            key: config_key(field),
            reason: format!("{value} {reason}"),
        },
        other => ConfigError::Invalid {
            key: "scenario".into(),
            reason: other.to_string(),
        },
    }
}

fn config_key(field: &str) -> String {
    match field {
        "tau" | "rho" | "pc_fraction" => format!("scenario.{field}"),
        "trials" | "block_size" => format!("mc.{field}"),
        "mu_db" | "sigma_db" => format!("system.ch*.{field}"),
        other => format!("system.{other}"),
    }
}

fn check_sweep(sweep: &Sweep, scenario: &Scenario) -> Result<(), ConfigError> {
    match sweep.axis {
        SweepAxis::Tau if !matches!(scenario.eh, Harvesting::TimeSwitching { .. }) => {
            return Err(invalid("sweep.axis", "tau sweeps need scenario.eh = tsr"));
        }
        SweepAxis::Rho if !matches!(scenario.eh, Harvesting::PowerSplitting { .. }) => {
            return Err(invalid("sweep.axis", "rho sweeps need scenario.eh = psr"));
        }
        SweepAxis::D1 => {
            if let Some(total) = sweep.total_m {
                if sweep
                    .values
                    .iter()
                    .any(|&d1| d1 <= 0.0 || total - d1 <= 0.0)
                {
                    return Err(invalid("sweep.values", "need 0 < d1 < sweep.total_m"));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut b = ConfigBuilder::default();
        b.apply_text(text)?;
        b.build()
    }

    /// Effective configuration as `(key, value)` pairs in a fixed order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let s = &self.system;
        let mut out: Vec<(String, String)> = vec![
            ("system.ps_watts".into(), s.ps_watts.to_string()),
            ("system.eta".into(), s.eta.to_string()),
            ("system.path_loss_exp".into(), s.path_loss_exp.to_string()),
            ("system.d1_m".into(), s.d1_m.to_string()),
            ("system.d2_m".into(), s.d2_m.to_string()),
            ("system.sigma_a2_w".into(), s.sigma_a2_w.to_string()),
            ("system.sigma_c2_w".into(), s.sigma_c2_w.to_string()),
            ("system.sigma_d2_w".into(), s.sigma_d2_w.to_string()),
            ("system.cth".into(), s.cth.to_string()),
            ("system.ch1.mu_db".into(), s.ch1.mu_db.to_string()),
            ("system.ch1.sigma_db".into(), s.ch1.sigma_db.to_string()),
            ("system.ch2.mu_db".into(), s.ch2.mu_db.to_string()),
            ("system.ch2.sigma_db".into(), s.ch2.sigma_db.to_string()),
            ("system.chg.mu_db".into(), s.chg.mu_db.to_string()),
            ("system.chg.sigma_db".into(), s.chg.sigma_db.to_string()),
        ];
        let sc = &self.scenario;
        out.push((
            "scenario.duplex".into(),
            match sc.duplex {
                Duplex::Half => "hd",
                Duplex::Full => "fd",
            }
            .into(),
        ));
        out.push((
            "scenario.relay".into(),
            match sc.relay {
                Relaying::DecodeForward => "df",
                Relaying::AmplifyForward => "af",
            }
            .into(),
        ));
        match sc.eh {
            Harvesting::TimeSwitching { tau } => {
                out.push(("scenario.eh".into(), "tsr".into()));
                out.push(("scenario.tau".into(), tau.to_string()));
            }
            Harvesting::PowerSplitting { rho } => {
                out.push(("scenario.eh".into(), "psr".into()));
                out.push(("scenario.rho".into(), rho.to_string()));
            }
            Harvesting::Ideal => out.push(("scenario.eh".into(), "irr".into())),
        }
        out.push(("scenario.pc_fraction".into(), sc.pc_fraction.to_string()));
        if let Some(sw) = &self.sweep {
            out.push(("sweep.axis".into(), sw.axis.name().into()));
            let vals: Vec<String> = sw.values.iter().map(f64::to_string).collect();
            out.push(("sweep.values".into(), vals.join(",")));
            if let Some(t) = sw.total_m {
                out.push(("sweep.total_m".into(), t.to_string()));
            }
        }
        match &self.mc {
            Some(p) => {
                out.push(("mc.enabled".into(), "true".into()));
                out.push(("mc.trials".into(), p.trials.to_string()));
                out.push(("mc.seed".into(), p.seed.to_string()));
                out.push(("mc.block_size".into(), p.block_size.to_string()));
            }
            None => out.push(("mc.enabled".into(), "false".into())),
        }
        out
    }
}
