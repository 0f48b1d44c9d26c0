//! Acceptance grid: each check returns a [`Report`] with a pass/fail verdict
//! and the figures behind it.

use std::fmt;

use rayon::prelude::*;
use relay_outage::{evaluate, Harvesting, McPlan, Relaying, Scenario, SystemConfig};

use crate::config::{ExperimentConfig, Format, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::figures::{self, Figure, FIG5_POWERS, FIG6_COSTS, FIG7_POWERS, FIG7_SIGMA_G2, FIG7_TAU};
use crate::run::{evaluate_point, optimize_point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    /// Monte Carlo trials per point.
    pub trials: u64,
    pub seed: u64,
    /// Trials per point for the determinism runs.
    pub determinism_trials: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: DEFAULT_SEED,
            determinism_trials: 100_000,
        }
    }
}

impl SelftestOptions {
    fn plan(&self) -> McPlan {
        McPlan::new(self.trials, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub summary: String,
    /// Supplementary findings that do not affect the verdict.
    pub details: Vec<String>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} [{verdict}] {}: {}",
            self.id, self.title, self.summary
        )?;
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const FD_SIGMA_G2: [f64; 2] = [2.0, 5.0];

fn tsr(tau: f64) -> Harvesting {
    Harvesting::TimeSwitching { tau }
}

fn psr(rho: f64) -> Harvesting {
    Harvesting::PowerSplitting { rho }
}

fn relays() -> [Relaying; 2] {
    [Relaying::DecodeForward, Relaying::AmplifyForward]
}

fn analytic(cfg: &SystemConfig, s: &Scenario) -> CliResult<f64> {
    evaluate(cfg, s)
        .map(|o| o.value)
        .map_err(|e| CliError::from_outage(s.to_string(), e))
}

/// Every (config, scenario) point of the analytic-versus-simulation grid.
pub fn agreement_grid() -> Vec<(String, SystemConfig, Scenario)> {
    let base = SystemConfig::default();
    let mut pts = Vec::new();
    for relay in relays() {
        for p in GRID {
            for eh in [tsr(p), psr(p)] {
                let s = Scenario::hd(relay, eh);
                pts.push((format!("{s} p={p}"), base, s));
            }
        }
        let s = Scenario::hd(relay, Harvesting::Ideal);
        pts.push((s.to_string(), base, s));
        for sg2 in FD_SIGMA_G2 {
            let mut cfg = base;
            cfg.chg.sigma_db = f64::sqrt(sg2);
            for tau in GRID {
                let s = Scenario::fd(relay, tau);
                pts.push((format!("{s} sg2={sg2} tau={tau}"), cfg, s));
            }
        }
    }
    pts
}

/// Worst ratio `|analytic − mc| / max(3·stderr, 1e-3)` over `points`, with its label.
fn agreement(
    points: &[(String, SystemConfig, Scenario)],
    plan: &McPlan,
) -> CliResult<(f64, String, usize)> {
    let ratios: CliResult<Vec<(f64, String)>> = points
        .par_iter()
        .map(|(label, cfg, s)| {
            let p = evaluate_point(cfg, s, Some(plan))?;
            let mc = p.mc.expect("simulated");
            let tol = (3.0 * mc.stderr.unwrap_or(0.0)).max(1e-3);
            let d = (p.analytic - mc.value).abs();
            Ok((
                d / tol,
                format!("{label}: analytic {:.6} mc {:.6}", p.analytic, mc.value),
            ))
        })
        .collect();
    let ratios = ratios?;
    let n = ratios.len();
    let (worst, label) = ratios
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty grid");
    Ok((worst, label, n))
}

pub fn criterion_1(opts: &SelftestOptions) -> CliResult<Report> {
    let (worst, label, n) = agreement(&agreement_grid(), &opts.plan())?;
    Ok(Report {
        id: 1,
        title: "analytic matches Monte Carlo",
        passed: worst <= 1.0,
        summary: format!(
            "{n} points at {} trials, worst |d|/tol = {worst:.3}",
            opts.trials
        ),
        details: vec![format!("worst point {label}")],
    })
}

pub fn criterion_2() -> CliResult<Report> {
    let cfg = SystemConfig::default();
    let mut failures = Vec::new();
    let mut min_edge = f64::INFINITY;
    let mut max_zero: f64 = 0.0;
    let mut parametric = Vec::new();
    for relay in relays() {
        parametric.push(Scenario::hd(relay, tsr(0.5)));
        parametric.push(Scenario::hd(relay, psr(0.5)));
        parametric.push(Scenario::fd(relay, 0.5));
    }
    for s in &parametric {
        for p in [1e-4, 1.0 - 1e-4] {
            let at = s.with_eh_param(p);
            let v = analytic(&cfg, &at)?;
            min_edge = min_edge.min(v);
            if v < 0.999 {
                failures.push(format!("{at} at {p}: {v}"));
            }
        }
    }
    let mut all = parametric.clone();
    for relay in relays() {
        all.push(Scenario::hd(relay, Harvesting::Ideal));
    }
    let zero = SystemConfig { cth: 0.0, ..cfg };
    for s in &all {
        let v = analytic(&zero, s)?;
        max_zero = max_zero.max(v);
        if v > 1e-12 {
            failures.push(format!("{s} at Cth = 0: {v}"));
        }
    }
    Ok(Report {
        id: 2,
        title: "boundary limits",
        passed: failures.is_empty(),
        summary: format!(
            "min outage at parameter edges {min_edge:.6}, max outage at Cth = 0 {max_zero:e}"
        ),
        details: failures,
    })
}

pub fn criterion_3() -> CliResult<Report> {
    let cfg = SystemConfig::default();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for p in GRID {
        for eh in [tsr(p), psr(p)] {
            let df = analytic(&cfg, &Scenario::hd(Relaying::DecodeForward, eh))?;
            let af = analytic(&cfg, &Scenario::hd(Relaying::AmplifyForward, eh))?;
            worst = worst.max(df - af);
            if df > af + 3e-3 {
                failures.push(format!("{eh:?}: DF {df} AF {af}"));
            }
        }
    }
    Ok(Report {
        id: 3,
        title: "DF no worse than AF",
        passed: failures.is_empty(),
        summary: format!("max(DF - AF) = {worst:.3e} over 18 points per relay"),
        details: failures,
    })
}

fn min_outage(cfg: &SystemConfig, s: &Scenario) -> CliResult<f64> {
    Ok(optimize_point(cfg, s, None)?.1.analytic)
}

pub fn criterion_4() -> CliResult<Report> {
    let mut failures = Vec::new();
    let mut details = Vec::new();
    let mut worst = f64::INFINITY;
    for ps in FIG5_POWERS {
        let cfg = SystemConfig {
            ps_watts: ps,
            ..SystemConfig::default()
        };
        for relay in relays() {
            let irr = analytic(&cfg, &Scenario::hd(relay, Harvesting::Ideal))?;
            let p = min_outage(&cfg, &Scenario::hd(relay, psr(0.5)))?;
            let t = min_outage(&cfg, &Scenario::hd(relay, tsr(0.5)))?;
            worst = worst.min(p - irr).min(t - p);
            details.push(format!(
                "{relay:?} Ps={ps}: IRR {irr:.6} PSR* {p:.6} TSR* {t:.6}"
            ));
            if p - irr < -1e-3 || t - p < -1e-3 {
                failures.push(format!("{relay:?} Ps={ps}"));
            }
        }
    }
    details.extend(failures.iter().map(|f| format!("ordering violated: {f}")));
    Ok(Report {
        id: 4,
        title: "IRR <= optimized PSR <= optimized TSR",
        passed: failures.is_empty(),
        summary: format!("smallest slack {worst:.3e}"),
        details,
    })
}

pub const VARIANCE_SIGMAS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];

pub fn criterion_5() -> CliResult<Report> {
    let mut scenarios = Vec::new();
    for relay in relays() {
        for eh in [tsr(0.5), psr(0.5), Harvesting::Ideal] {
            scenarios.push(Scenario::hd(relay, eh));
        }
    }
    let mut details = Vec::new();
    let mut violations = 0usize;
    for ps in FIG5_POWERS {
        for s in &scenarios {
            let mut curve = Vec::with_capacity(VARIANCE_SIGMAS.len());
            for sigma in VARIANCE_SIGMAS {
                let mut cfg = SystemConfig {
                    ps_watts: ps,
                    ..SystemConfig::default()
                };
                cfg.ch1.sigma_db = sigma;
                cfg.ch2.sigma_db = sigma;
                curve.push(min_outage(&cfg, s)?);
            }
            let drops = curve.windows(2).filter(|w| w[1] < w[0] - 1e-9).count();
            violations += drops;
            let vals: Vec<String> = curve.iter().map(|v| format!("{v:.4}")).collect();
            let tag = if drops == 0 {
                "non-decreasing"
            } else {
                "decreases"
            };
            details.push(format!("{s} Ps={ps}: [{}] {tag}", vals.join(", ")));
        }
    }
    Ok(Report {
        id: 5,
        title: "minimum outage non-decreasing in channel variance",
        passed: violations == 0,
        summary: format!("{violations} decreasing steps over 12 curves"),
        details,
    })
}

fn midpoint_positions() -> [f64; 3] {
    [5.0, 15.0, 25.0]
}

pub fn criterion_6(opts: &SelftestOptions) -> CliResult<Report> {
    let plan = opts.plan();
    let mut curves: Vec<Scenario> = FIG6_COSTS
        .iter()
        .map(|&pc| Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal).with_pc_fraction(pc))
        .collect();
    curves.push(Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal));
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for s in &curves {
        let mut est = Vec::new();
        for d1 in midpoint_positions() {
            let cfg = SystemConfig {
                d1_m: d1,
                d2_m: figures::FIG6_TOTAL_M - d1,
                ..SystemConfig::default()
            };
            est.push(evaluate_point(&cfg, s, Some(&plan))?.mc.expect("simulated"));
        }
        let mid = est[1];
        for side in [est[0], est[2]] {
            let se = (mid.stderr.unwrap().powi(2) + side.stderr.unwrap().powi(2)).sqrt();
            if mid.value - side.value < -3.0 * se {
                failures.push(format!("{s} Pc={}", s.pc_fraction));
            }
        }
        details.push(format!(
            "{s} Pc={}: d1=5 {:.6} d1=15 {:.6} d1=25 {:.6}",
            s.pc_fraction, est[0].value, mid.value, est[2].value
        ));
    }
    Ok(Report {
        id: 6,
        title: "midpoint relay placement is worst",
        passed: failures.is_empty(),
        summary: format!("{} violations over {} curves", failures.len(), curves.len()),
        details,
    })
}

pub fn criterion_7() -> CliResult<Report> {
    let cfg = ExperimentConfig {
        mc: None,
        ..ExperimentConfig::default()
    };
    let table = figures::run_figure(Figure::Fig6, &cfg)?;
    let df = figures::curve(&table, "HD-DF-IRR@Pc=0");
    let af = figures::curve(&table, "HD-AF-IRR");
    let bad: Vec<f64> = df
        .iter()
        .zip(&af)
        .filter(|(d, a)| d.analytic > a.analytic + 1e-9)
        .map(|(d, _)| d.axis_value)
        .collect();
    let crossover = figures::fig6_crossover(&table);
    let pc = FIG6_COSTS[FIG6_COSTS.len() - 1];
    let reported = if crossover.is_empty() {
        format!("reported: AF never beats DF at Pc={pc} (expected at one or more positions)")
    } else {
        let at: Vec<String> = crossover.iter().map(f64::to_string).collect();
        format!("reported: AF beats DF at Pc={pc} at d1 = {}", at.join(" "))
    };
    Ok(Report {
        id: 7,
        title: "DF beats AF without processing cost",
        passed: bad.is_empty(),
        summary: format!(
            "DF above AF at {} of {} positions with Pc=0",
            bad.len(),
            df.len()
        ),
        details: vec![reported],
    })
}

pub fn criterion_8(opts: &SelftestOptions) -> CliResult<Report> {
    let cfg = ExperimentConfig {
        mc: Some(opts.plan()),
        ..ExperimentConfig::default()
    };
    let table = figures::run_figure(Figure::Fig7, &cfg)?;
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    let mut n = 0;
    for r in table.rows.iter().filter(|r| r.scenario.starts_with("FD-")) {
        let mc = r.mc.expect("simulated");
        let tol = (3.0 * mc.stderr.unwrap_or(0.0)).max(1e-3);
        let ratio = (r.analytic - mc.value).abs() / tol;
        n += 1;
        if ratio > worst {
            worst = ratio;
            worst_label = format!(
                "{} cth={}: analytic {:.6} mc {:.6}",
                r.scenario, r.axis_value, r.analytic, mc.value
            );
        }
    }
    let mut details = vec![format!("worst point {worst_label}")];
    for o in figures::fig7_orderings(&table) {
        // FD expected ahead at the larger loop-back variance, HD at the smaller
        let expect_fd = o.sigma_g2 == FIG7_SIGMA_G2[1];
        let consistent = if expect_fd {
            o.fd_better == o.points
        } else {
            o.fd_better == 0
        };
        details.push(format!(
            "{:?} sg2={} Ps={}: FD below HD at {}/{} thresholds, expected {} {}",
            o.relay,
            o.sigma_g2,
            o.ps,
            o.fd_better,
            o.points,
            if expect_fd { "FD ahead" } else { "HD ahead" },
            if consistent {
                "(consistent)"
            } else {
                "(DISCREPANCY)"
            }
        ));
    }
    Ok(Report {
        id: 8,
        title: "full-duplex analytic matches Monte Carlo",
        passed: worst <= 1.0,
        summary: format!(
            "{n} FD points at tau={FIG7_TAU}, Ps in {FIG7_POWERS:?}, worst |d|/tol = {worst:.3}"
        ),
        details,
    })
}

fn fig4_csv(trials: u64, seed: u64, threads: Option<usize>) -> CliResult<String> {
    let cfg = ExperimentConfig {
        mc: Some(McPlan::new(trials, seed)),
        ..ExperimentConfig::default()
    };
    let run = || figures::run_figure(Figure::Fig4, &cfg).map(|t| t.to_string(Format::Csv));
    match threads {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run),
    }
}

pub fn criterion_9(opts: &SelftestOptions) -> CliResult<Report> {
    let (t, s) = (opts.determinism_trials, opts.seed);
    let a = fig4_csv(t, s, None)?;
    let b = fig4_csv(t, s, None)?;
    let one = fig4_csv(t, s, Some(1))?;
    let eight = fig4_csv(t, s, Some(8))?;
    let repeat = a == b;
    let threads = one == eight && one == a;
    Ok(Report {
        id: 9,
        title: "fig4 output is deterministic",
        passed: repeat && threads,
        summary: format!(
            "repeat run identical: {repeat}; 1 vs 8 threads identical: {threads} ({} bytes)",
            a.len()
        ),
        details: Vec::new(),
    })
}

/// Runs every criterion in order.
pub fn run_all(opts: &SelftestOptions) -> CliResult<Vec<Report>> {
    Ok(vec![
        criterion_1(opts)?,
        criterion_2()?,
        criterion_3()?,
        criterion_4()?,
        criterion_5()?,
        criterion_6(opts)?,
        criterion_7()?,
        criterion_8(opts)?,
        criterion_9(opts)?,
    ])
}
