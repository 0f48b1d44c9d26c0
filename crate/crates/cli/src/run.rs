//! Point, sweep and optimization runs.

use rayon::prelude::*;
use relay_outage::montecarlo::estimate_outage;
use relay_outage::optimize::{minimize_over_eh_param, DEFAULT_TOL};
use relay_outage::{evaluate, Harvesting, McPlan, OutageEstimate, Scenario, SystemConfig};

use crate::config::{to_config_error, ExperimentConfig, SweepAxis};
use crate::error::{CliError, CliResult};
use crate::output::{Row, Table};

/// Analytic value plus an optional Monte Carlo estimate at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub analytic: f64,
    pub mc: Option<OutageEstimate>,
}

impl PointResult {
    /// `analytic − mc`, if simulated.
    pub fn delta(&self) -> Option<f64> {
        self.mc.map(|m| self.analytic - m.value)
    }
}

pub fn evaluate_point(
    cfg: &SystemConfig,
    scenario: &Scenario,
    plan: Option<&McPlan>,
) -> CliResult<PointResult> {
    let context = || format!("{scenario} (cth = {}, ps = {})", cfg.cth, cfg.ps_watts);
    let analytic = evaluate(cfg, scenario)
        .map_err(|e| CliError::from_outage(context(), e))?
        .value;
    let mc = match plan {
        Some(p) => Some(
            estimate_outage(cfg, scenario, p).map_err(|e| CliError::from_outage(context(), e))?,
        ),
        None => None,
    };
    Ok(PointResult { analytic, mc })
}

/// Applies one sweep coordinate to a copy of the base parameters.
pub fn apply_axis(
    cfg: &SystemConfig,
    scenario: &Scenario,
    axis: SweepAxis,
    value: f64,
    total_m: Option<f64>,
) -> CliResult<(SystemConfig, Scenario)> {
    let mut c = *cfg;
    let mut s = *scenario;
    match axis {
        SweepAxis::Tau | SweepAxis::Rho => s = s.with_eh_param(value),
        SweepAxis::Cth => c.cth = value,
        SweepAxis::D1 => {
            c.d1_m = value;
            if let Some(total) = total_m {
                c.d2_m = total - value;
            }
        }
        SweepAxis::SigmaDb => {
            c.ch1.sigma_db = value;
            c.ch2.sigma_db = value;
        }
        SweepAxis::Ps => c.ps_watts = value,
        SweepAxis::SigmaGDb => c.chg.sigma_db = value,
    }
    c.validate()
        .map_err(|e| CliError::Config(to_config_error(e)))?;
    s.validate()
        .map_err(|e| CliError::Config(to_config_error(e)))?;
    Ok((c, s))
}

fn row(label: String, axis: &str, axis_value: f64, p: PointResult, plan: Option<&McPlan>) -> Row {
    Row {
        scenario: label,
        axis: axis.to_string(),
        axis_value,
        analytic: p.analytic,
        mc: p.mc,
        seed: plan.map(|p| p.seed),
        arg_opt: None,
    }
}

fn header(cfg: &ExperimentConfig) -> Vec<String> {
    cfg.to_pairs()
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect()
}

pub fn run_point(cfg: &ExperimentConfig) -> CliResult<Table> {
    let plan = cfg.mc.as_ref();
    let p = evaluate_point(&cfg.system, &cfg.scenario, plan)?;
    let mut table = Table::new(header(cfg));
    if let Some(d) = p.delta() {
        table.notes.push(format!("analytic - mc = {d}"));
    }
    let (axis, value) = match cfg.scenario.eh.param() {
        Some(v) => (param_name(cfg.scenario.eh), v),
        None => ("cth", cfg.system.cth),
    };
    table
        .rows
        .push(row(cfg.scenario.to_string(), axis, value, p, plan));
    Ok(table)
}

pub fn run_sweep(cfg: &ExperimentConfig) -> CliResult<Table> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| {
        CliError::Config(crate::config::ConfigError::Invalid {
            key: "sweep.axis".into(),
            reason: "the sweep command needs sweep.axis and sweep.values".into(),
        })
    })?;
    let plan = cfg.mc.as_ref();
    let rows: CliResult<Vec<Row>> = sweep
        .values
        .par_iter()
        .map(|&v| {
            let (c, s) = apply_axis(&cfg.system, &cfg.scenario, sweep.axis, v, sweep.total_m)?;
            let p = evaluate_point(&c, &s, plan)?;
            Ok(row(cfg.scenario.to_string(), sweep.axis.name(), v, p, plan))
        })
        .collect();
    let mut table = Table::new(header(cfg));
    table.rows = rows?;
    Ok(table)
}

pub(crate) fn param_name(eh: Harvesting) -> &'static str {
    match eh {
        Harvesting::TimeSwitching { .. } => "tau",
        Harvesting::PowerSplitting { .. } => "rho",
        Harvesting::Ideal => "none",
    }
}

/// Minimum outage of `scenario` over its harvesting parameter; IRR has no
/// parameter and is evaluated directly.
pub fn optimize_point(
    cfg: &SystemConfig,
    scenario: &Scenario,
    plan: Option<&McPlan>,
) -> CliResult<(Option<f64>, PointResult)> {
    if scenario.eh == Harvesting::Ideal {
        return Ok((None, evaluate_point(cfg, scenario, plan)?));
    }
    let opt = minimize_over_eh_param(cfg, scenario, DEFAULT_TOL)
        .map_err(|e| CliError::from_outage(format!("optimizing {scenario}"), e))?;
    let at = scenario.with_eh_param(opt.arg_opt);
    let mc = match plan {
        Some(p) => Some(
            estimate_outage(cfg, &at, p).map_err(|e| CliError::from_outage(at.to_string(), e))?,
        ),
        None => None,
    };
    Ok((
        Some(opt.arg_opt),
        PointResult {
            analytic: opt.value_opt,
            mc,
        },
    ))
}

/// Optimizes the harvesting parameter, once or at every point of a sweep
/// over a non-harvesting axis.
pub fn run_optimize(cfg: &ExperimentConfig) -> CliResult<Table> {
    if cfg.scenario.eh == Harvesting::Ideal {
        return Err(CliError::Config(crate::config::ConfigError::Invalid {
            key: "scenario.eh".into(),
            reason: "optimization needs tsr or psr".into(),
        }));
    }
    let plan = cfg.mc.as_ref();
    let points: Vec<(&str, f64, Option<f64>)> = match &cfg.sweep {
        None => vec![("cth", cfg.system.cth, None)],
        Some(sw) if matches!(sw.axis, SweepAxis::Tau | SweepAxis::Rho) => {
            return Err(CliError::Config(crate::config::ConfigError::Invalid {
                key: "sweep.axis".into(),
                reason: "cannot sweep the parameter being optimized".into(),
            }))
        }
        Some(sw) => sw
            .values
            .iter()
            .map(|&v| (sw.axis.name(), v, sw.total_m))
            .collect(),
    };
    let rows: CliResult<Vec<Row>> = points
        .par_iter()
        .map(|&(axis, v, total)| {
            let (c, s) = match cfg.sweep {
                Some(ref sw) => apply_axis(&cfg.system, &cfg.scenario, sw.axis, v, total)?,
                None => (cfg.system, cfg.scenario),
            };
            let (arg, p) = optimize_point(&c, &s, plan)?;
            let mut r = row(s.to_string(), axis, v, p, plan);
            r.arg_opt = arg;
            Ok(r)
        })
        .collect();
    let mut table = Table::new(header(cfg));
    table.arg_opt_name = Some(format!("{}_opt", param_name(cfg.scenario.eh)));
    table.rows = rows?;
    Ok(table)
}
