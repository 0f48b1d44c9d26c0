//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes a JSON object of parameters and returns a JSON string;
//! missing fields fall back to the reference system. The plain-Rust
//! functions behind the exports are tested natively.

use relay_outage::montecarlo::estimate_outage;
use relay_outage::optimize::{minimize_over_eh_param, DEFAULT_TOL};
use relay_outage::{evaluate, Harvesting, McPlan, OutageError, Relaying, Scenario, SystemConfig};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct Params {
    /// `"df"` or `"af"`.
    pub relay: String,
    /// `"tsr"` or `"psr"`.
    pub eh: String,
    pub ps: f64,
    pub cth: f64,
    pub mu_db: f64,
    pub sigma_db: f64,
    /// Loop-back channel variance in dB².
    pub sigma_g2: f64,
    pub tau: f64,
    /// Monte Carlo trials per point; 0 skips the simulation.
    pub trials: u64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            relay: "df".into(),
            eh: "tsr".into(),
            ps: 1.0,
            cth: 2.0,
            mu_db: 3.0,
            sigma_db: 2.0,
            sigma_g2: 5.0,
            tau: 0.01,
            trials: 0,
            seed: 1,
        }
    }
}

impl Params {
    fn system(&self) -> SystemConfig {
        let mut cfg = SystemConfig {
            ps_watts: self.ps,
            cth: self.cth,
            ..SystemConfig::default()
        };
        cfg.ch1.mu_db = self.mu_db;
        cfg.ch1.sigma_db = self.sigma_db;
        cfg.ch2 = cfg.ch1;
        cfg.chg.sigma_db = self.sigma_g2.max(0.0).sqrt();
        cfg
    }

    fn relay(&self) -> Result<Relaying, String> {
        match self.relay.as_str() {
            "df" => Ok(Relaying::DecodeForward),
            "af" => Ok(Relaying::AmplifyForward),
            other => Err(format!("unknown relay `{other}`")),
        }
    }

    fn harvesting(&self, p: f64) -> Result<Harvesting, String> {
        match self.eh.as_str() {
            "tsr" => Ok(Harvesting::TimeSwitching { tau: p }),
            "psr" => Ok(Harvesting::PowerSplitting { rho: p }),
            other => Err(format!("unknown harvesting protocol `{other}`")),
        }
    }

    fn plan(&self) -> Option<McPlan> {
        (self.trials > 0).then(|| {
            McPlan::new(
                self.trials.max(relay_outage::montecarlo::MIN_TRIALS),
                self.seed,
            )
        })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Point {
    pub x: f64,
    pub analytic: f64,
    pub mc: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Optimum {
    pub label: String,
    pub arg_opt: f64,
    pub value_opt: f64,
    /// Ideal-receiver outage, a lower bound.
    pub ideal: f64,
}

fn err(e: OutageError) -> String {
    e.to_string()
}

fn point(cfg: &SystemConfig, s: &Scenario, x: f64, plan: Option<&McPlan>) -> Result<Point, String> {
    let analytic = evaluate(cfg, s).map_err(err)?.value;
    let mc = match plan {
        Some(p) => Some(estimate_outage(cfg, s, p).map_err(err)?.value),
        None => None,
    };
    Ok(Point { x, analytic, mc })
}

/// Outage versus τ or ρ on `{0.02, …, 0.98}`.
pub fn param_curve(p: &Params) -> Result<Curve, String> {
    let cfg = p.system();
    let plan = p.plan();
    let relay = p.relay()?;
    let mut points = Vec::new();
    let mut label = String::new();
    for i in 1..50 {
        let x = i as f64 * 0.02;
        let s = Scenario::hd(relay, p.harvesting(x)?);
        label = s.to_string();
        points.push(point(&cfg, &s, x, plan.as_ref())?);
    }
    Ok(Curve { label, points })
}

pub fn optimum(p: &Params) -> Result<Optimum, String> {
    let cfg = p.system();
    let relay = p.relay()?;
    let s = Scenario::hd(relay, p.harvesting(0.5)?);
    let r = minimize_over_eh_param(&cfg, &s, DEFAULT_TOL).map_err(err)?;
    let ideal = evaluate(&cfg, &Scenario::hd(relay, Harvesting::Ideal))
        .map_err(err)?
        .value;
    Ok(Optimum {
        label: s.to_string(),
        arg_opt: r.arg_opt,
        value_opt: r.value_opt,
        ideal,
    })
}

/// Full- and half-duplex outage versus rate threshold at a fixed τ.
pub fn duplex_curves(p: &Params) -> Result<Vec<Curve>, String> {
    let relay = p.relay()?;
    let plan = p.plan();
    let base = p.system();
    let mut curves = Vec::new();
    for s in [
        Scenario::fd(relay, p.tau),
        Scenario::hd(relay, Harvesting::TimeSwitching { tau: p.tau }),
    ] {
        let mut points = Vec::new();
        for i in 0..15 {
            let cth = 0.5 + 0.25 * i as f64;
            let cfg = SystemConfig { cth, ..base };
            points.push(point(&cfg, &s, cth, plan.as_ref())?);
        }
        curves.push(Curve {
            label: s.to_string(),
            points,
        });
    }
    Ok(curves)
}

fn run<T: Serialize>(
    json: &str,
    f: impl FnOnce(&Params) -> Result<T, String>,
) -> Result<String, String> {
    let params: Params = if json.trim().is_empty() {
        Params::default()
    } else {
        serde_json::from_str(json).map_err(|e| format!("bad parameters: {e}"))?
    };
    let out = f(&params)?;
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Outage versus the harvesting parameter.
#[wasm_bindgen(js_name = paramCurve)]
pub fn param_curve_js(json: &str) -> Result<String, JsValue> {
    run(json, param_curve).map_err(|e| JsValue::from_str(&e))
}

/// Optimal τ or ρ and the ideal-receiver bound.
#[wasm_bindgen(js_name = optimum)]
pub fn optimum_js(json: &str) -> Result<String, JsValue> {
    run(json, optimum).map_err(|e| JsValue::from_str(&e))
}

/// Full-duplex versus half-duplex curves over the rate threshold.
#[wasm_bindgen(js_name = duplexCurves)]
pub fn duplex_curves_js(json: &str) -> Result<String, JsValue> {
    run(json, duplex_curves).map_err(|e| JsValue::from_str(&e))
}
