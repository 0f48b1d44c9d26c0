//! Built-in datasets for the four reference figures.
//!
//! Each preset starts from the configured system parameters and overrides
//! only what the figure varies, so `--override` adjusts everything else.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use relay_outage::{Harvesting, McPlan, Relaying, Scenario, SystemConfig};

use crate::config::{parse_values, ExperimentConfig};
use crate::error::CliResult;
use crate::output::{Row, Table};
use crate::run::{evaluate_point, optimize_point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Outage versus τ and ρ for the four half-duplex TSR/PSR systems.
    Fig4,
    /// Minimum outage versus channel variance.
    Fig5,
    /// Outage versus relay position with processing cost.
    Fig6,
    /// Full- versus half-duplex outage versus rate threshold.
    Fig7,
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            "fig6" => Ok(Figure::Fig6),
            "fig7" => Ok(Figure::Fig7),
            _ => Err(format!(
                "unknown figure `{s}` (expected fig4, fig5, fig6 or fig7)"
            )),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        })
    }
}

/// Channel variances (dB²) for the minimum-outage figure.
pub const FIG5_SIGMA2: [f64; 6] = [0.25, 1.0, 2.25, 4.0, 6.25, 9.0];
pub const FIG5_POWERS: [f64; 2] = [1.0, 5.0];
pub const FIG6_TOTAL_M: f64 = 30.0;
pub const FIG6_COSTS: [f64; 3] = [0.0, 0.01, 0.02];
pub const FIG7_TAU: f64 = 0.01;
pub const FIG7_SIGMA_G2: [f64; 2] = [2.0, 5.0];
pub const FIG7_POWERS: [f64; 2] = [1.0, 10.0];

/// One point of a figure: a curve label, an abscissa, and the parameters.
#[derive(Debug, Clone)]
struct Job {
    label: String,
    axis: &'static str,
    axis_value: f64,
    cfg: SystemConfig,
    scenario: Scenario,
    optimize: bool,
}

fn hd_tsr_psr() -> [Scenario; 4] {
    [
        Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::TimeSwitching { tau: 0.5 },
        ),
        Scenario::hd(
            Relaying::AmplifyForward,
            Harvesting::TimeSwitching { tau: 0.5 },
        ),
        Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        ),
        Scenario::hd(
            Relaying::AmplifyForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        ),
    ]
}

fn fig4_jobs(base: &SystemConfig) -> Vec<Job> {
    let grid = parse_values("0.05:0.05:0.95").expect("static grid");
    let mut jobs = Vec::new();
    for s in hd_tsr_psr() {
        let axis = crate::run::param_name(s.eh);
        for &p in &grid {
            jobs.push(Job {
                label: s.to_string(),
                axis,
                axis_value: p,
                cfg: *base,
                scenario: s.with_eh_param(p),
                optimize: false,
            });
        }
    }
    jobs
}

fn fig5_jobs(base: &SystemConfig) -> Vec<Job> {
    let mut scenarios = hd_tsr_psr().to_vec();
    scenarios.push(Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal));
    scenarios.push(Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal));
    let mut jobs = Vec::new();
    for ps in FIG5_POWERS {
        for s in &scenarios {
            for s2 in FIG5_SIGMA2 {
                let mut cfg = SystemConfig {
                    ps_watts: ps,
                    ..*base
                };
                cfg.ch1.sigma_db = s2.sqrt();
                cfg.ch2.sigma_db = s2.sqrt();
                jobs.push(Job {
                    label: format!("{s}@Ps={ps}"),
                    axis: "sigma2_db",
                    axis_value: s2,
                    cfg,
                    scenario: *s,
                    optimize: true,
                });
            }
        }
    }
    jobs
}

fn fig6_jobs(base: &SystemConfig) -> Vec<Job> {
    let mut curves: Vec<(String, Scenario)> = FIG6_COSTS
        .iter()
        .map(|&pc| {
            let s = Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal).with_pc_fraction(pc);
            (format!("{s}@Pc={pc}"), s)
        })
        .collect();
    let af = Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal);
    curves.push((af.to_string(), af));
    let mut jobs = Vec::new();
    for (label, s) in curves {
        for d1 in 1..FIG6_TOTAL_M as u32 {
            let d1 = d1 as f64;
            jobs.push(Job {
                label: label.clone(),
                axis: "d1",
                axis_value: d1,
                cfg: SystemConfig {
                    d1_m: d1,
                    d2_m: FIG6_TOTAL_M - d1,
                    ..*base
                },
                scenario: s,
                optimize: false,
            });
        }
    }
    jobs
}

fn fig7_cth() -> Vec<f64> {
    parse_values("0.5:0.25:4").expect("static grid")
}

fn fig7_jobs(base: &SystemConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let tsr = Harvesting::TimeSwitching { tau: FIG7_TAU };
    for ps in FIG7_POWERS {
        let mut curves: Vec<(String, SystemConfig, Scenario)> = Vec::new();
        for sg2 in FIG7_SIGMA_G2 {
            let mut cfg = SystemConfig {
                ps_watts: ps,
                ..*base
            };
            cfg.chg.sigma_db = sg2.sqrt();
            for relay in [Relaying::DecodeForward, Relaying::AmplifyForward] {
                let s = Scenario::fd(relay, FIG7_TAU);
                curves.push((format!("{s}@sg2={sg2}/Ps={ps}"), cfg, s));
            }
        }
        let cfg = SystemConfig {
            ps_watts: ps,
            ..*base
        };
        for relay in [Relaying::DecodeForward, Relaying::AmplifyForward] {
            let s = Scenario::hd(relay, tsr);
            curves.push((format!("{s}@Ps={ps}"), cfg, s));
        }
        for (label, cfg, s) in curves {
            for cth in fig7_cth() {
                jobs.push(Job {
                    label: label.clone(),
                    axis: "cth",
                    axis_value: cth,
                    cfg: SystemConfig { cth, ..cfg },
                    scenario: s,
                    optimize: false,
                });
            }
        }
    }
    jobs
}

fn run_jobs(jobs: &[Job], plan: Option<&McPlan>) -> CliResult<Vec<Row>> {
    jobs.par_iter()
        .map(|j| {
            let (arg_opt, p) = if j.optimize {
                optimize_point(&j.cfg, &j.scenario, plan)?
            } else {
                (None, evaluate_point(&j.cfg, &j.scenario, plan)?)
            };
            Ok(Row {
                scenario: j.label.clone(),
                axis: j.axis.to_string(),
                axis_value: j.axis_value,
                analytic: p.analytic,
                mc: p.mc,
                seed: plan.map(|p| p.seed),
                arg_opt,
            })
        })
        .collect()
}

/// Rows of curve `label`, in abscissa order.
pub fn curve<'a>(table: &'a Table, label: &str) -> Vec<&'a Row> {
    table.rows.iter().filter(|r| r.scenario == label).collect()
}

pub fn run_figure(which: Figure, cfg: &ExperimentConfig) -> CliResult<Table> {
    let base = cfg.system;
    let plan = cfg.mc.as_ref();
    let jobs = match which {
        Figure::Fig4 => fig4_jobs(&base),
        Figure::Fig5 => fig5_jobs(&base),
        Figure::Fig6 => fig6_jobs(&base),
        Figure::Fig7 => fig7_jobs(&base),
    };
    let mut config = vec![format!("figure = {which}")];
    config.extend(
        cfg.to_pairs()
            .into_iter()
            .filter(|(k, _)| k.starts_with("system.") || k.starts_with("mc."))
            .map(|(k, v)| format!("{k} = {v}")),
    );
    let mut table = Table::new(config);
    table.rows = run_jobs(&jobs, plan)?;
    match which {
        Figure::Fig4 => {}
        Figure::Fig5 => {
            table.arg_opt_name = Some("param_opt".into());
            table.notes.push(
                "the channel-variance grid {0.25, 1, 2.25, 4, 6.25, 9} dB^2 is implementation-chosen; \
                 both hops share the variance"
                    .into(),
            );
            table.notes.push(
                "param_opt is the minimizing tau (TSR) or rho (PSR); IRR rows have none".into(),
            );
        }
        Figure::Fig6 => table.notes.extend(fig6_notes(&table)),
        Figure::Fig7 => table.notes.extend(fig7_notes(&table)),
    }
    Ok(table)
}

/// Relay positions at which AF beats DF with the largest processing cost.
pub fn fig6_crossover(table: &Table) -> Vec<f64> {
    let pc = FIG6_COSTS[FIG6_COSTS.len() - 1];
    let df = curve(table, &format!("HD-DF-IRR@Pc={pc}"));
    let af = curve(table, "HD-AF-IRR");
    df.iter()
        .zip(&af)
        .filter(|(d, a)| a.analytic < d.analytic)
        .map(|(d, _)| d.axis_value)
        .collect()
}

fn fig6_notes(table: &Table) -> Vec<String> {
    let at = fig6_crossover(table);
    let pc = FIG6_COSTS[FIG6_COSTS.len() - 1];
    let list: Vec<String> = at.iter().map(f64::to_string).collect();
    vec![
        format!("d1 + d2 = {FIG6_TOTAL_M} m; Pc is a fraction of the harvested power"),
        if at.is_empty() {
            format!("AF beats DF at Pc={pc}: no (analytic)")
        } else {
            format!(
                "AF beats DF at Pc={pc}: yes, at d1 = {} (analytic)",
                list.join(" ")
            )
        },
    ]
}

/// Counts of abscissae where full duplex beats half duplex, per curve pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplexOrdering {
    pub relay: Relaying,
    pub sigma_g2: f64,
    pub ps: f64,
    pub fd_better: usize,
    pub points: usize,
}

pub fn fig7_orderings(table: &Table) -> Vec<DuplexOrdering> {
    let mut out = Vec::new();
    for ps in FIG7_POWERS {
        for sg2 in FIG7_SIGMA_G2 {
            for (relay, tag) in [
                (Relaying::DecodeForward, "DF"),
                (Relaying::AmplifyForward, "AF"),
            ] {
                let fd = curve(table, &format!("FD-{tag}-TSR@sg2={sg2}/Ps={ps}"));
                let hd = curve(table, &format!("HD-{tag}-TSR@Ps={ps}"));
                let fd_better = fd
                    .iter()
                    .zip(&hd)
                    .filter(|(f, h)| f.analytic < h.analytic)
                    .count();
                out.push(DuplexOrdering {
                    relay,
                    sigma_g2: sg2,
                    ps,
                    fd_better,
                    points: fd.len(),
                });
            }
        }
    }
    out
}

fn fig7_notes(table: &Table) -> Vec<String> {
    let mut notes = vec![format!(
        "tau = {FIG7_TAU} for every curve; sg2 is the loop-back channel variance in dB^2"
    )];
    for o in fig7_orderings(table) {
        notes.push(format!(
            "{:?} sg2={} Ps={}: FD below HD at {}/{} thresholds",
            o.relay, o.sigma_g2, o.ps, o.fd_better, o.points
        ));
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_counts() {
        let base = SystemConfig::default();
        assert_eq!(fig4_jobs(&base).len(), 4 * 19);
        assert_eq!(fig5_jobs(&base).len(), 2 * 6 * 6);
        assert_eq!(fig6_jobs(&base).len(), 4 * 29);
        assert_eq!(fig7_jobs(&base).len(), 2 * 6 * 15);
    }

    #[test]
    fn fig4_grid_labels_are_clean() {
        let jobs = fig4_jobs(&SystemConfig::default());
        assert_eq!(jobs[2].axis_value, 0.15);
        assert_eq!(jobs[18].axis_value, 0.95);
        assert_eq!(jobs[19].label, "HD-AF-TSR");
    }

    #[test]
    fn fig5_avoids_zero_variance() {
        let jobs = fig5_jobs(&SystemConfig::default());
        let smallest = jobs
            .iter()
            .map(|j| j.cfg.ch1.sigma_db)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(smallest, 0.5);
    }

    #[test]
    fn figure_names_round_trip() {
        for f in [Figure::Fig4, Figure::Fig5, Figure::Fig6, Figure::Fig7] {
            assert_eq!(f.to_string().parse::<Figure>().unwrap(), f);
        }
        assert!("fig8".parse::<Figure>().is_err());
    }
}
