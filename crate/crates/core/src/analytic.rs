//! Analytic ergodic outage evaluators.
//!
//! Half-duplex scenarios reduce to one of two kernels. For DF, with
//! `γr = κr·X` and `γd = κd·X·Y`,
//!
//! ```text
//! O = F_X(v/κr) + ∫_{v/κr}^∞ f_X(z)·F_Y(v/(κd·z)) dz
//! ```
//!
//! and for AF, with `γd = A·X·Y/(B·Y + C)`,
//!
//! ```text
//! O = F_X(vB/A) + ∫_{vB/A}^∞ f_X(z)·F_Y(vC/(A·z − vB)) dz.
//! ```
//!
//! Full-duplex DF has a closed form in the CCDFs of `W = g²` and `Z = X·Y`;
//! full-duplex AF integrates the CCDF of `Z` against the density of `W`.

use serde::{Deserialize, Serialize};

use crate::error::{OutageError, Result};
use crate::lognormal::{product_ccdf_unchecked, q_function, XI};
use crate::model::{Duplex, Harvesting, LinkModel, Relaying, Scenario, SystemConfig};
use crate::quadrature::{integrate_lognormal_weighted, QuadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    MonteCarlo,
}

/// An outage probability with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub value: f64,
    pub method: Method,
    /// Binomial standard error (Monte Carlo only).
    pub stderr: Option<f64>,
    /// Number of trials (Monte Carlo only).
    pub trials: Option<u64>,
}

impl OutageEstimate {
    pub fn analytic(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: Method::Analytic,
            stderr: None,
            trials: None,
        }
    }

    /// Monte Carlo estimate from an exact outage count.
    pub fn from_counts(outages: u64, trials: u64) -> Self {
        let p = outages as f64 / trials as f64;
        Self {
            value: p,
            method: Method::MonteCarlo,
            stderr: Some((p * (1.0 - p) / trials as f64).sqrt()),
            trials: Some(trials),
        }
    }

    /// A Monte Carlo estimate of exactly 0 or 1, whose stderr carries no information.
    pub fn is_degenerate(&self) -> bool {
        self.method == Method::MonteCarlo && (self.value == 0.0 || self.value == 1.0)
    }
}

/// Dispatches to the evaluator matching `scenario`.
pub fn evaluate(cfg: &SystemConfig, scenario: &Scenario) -> Result<OutageEstimate> {
    evaluate_with(cfg, scenario, &QuadSpec::default())
}

pub fn evaluate_with(
    cfg: &SystemConfig,
    scenario: &Scenario,
    quad: &QuadSpec,
) -> Result<OutageEstimate> {
    let model = LinkModel::new(cfg, scenario)?;
    let v = scenario.snr_threshold(cfg.cth);
    if v == 0.0 {
        return Ok(OutageEstimate::analytic(0.0));
    }
    if v.is_infinite() {
        return Ok(OutageEstimate::analytic(1.0));
    }
    let value = match (scenario.duplex, scenario.relay) {
        (Duplex::Half, Relaying::DecodeForward) => df_kernel(&model, v, quad)?,
        (Duplex::Half, Relaying::AmplifyForward) => af_kernel(&model, v, quad)?,
        (Duplex::Full, Relaying::DecodeForward) => fd_df_closed_form(&model, v),
        (Duplex::Full, Relaying::AmplifyForward) => fd_af_integral(&model, v, quad)?,
    };
    Ok(OutageEstimate::analytic(value))
}

/// Half-duplex decode-and-forward with TSR, PSR or IRR harvesting.
pub fn hd_df_outage(
    cfg: &SystemConfig,
    eh: Harvesting,
    pc_fraction: f64,
) -> Result<OutageEstimate> {
    let s = Scenario::hd(Relaying::DecodeForward, eh).with_pc_fraction(pc_fraction);
    evaluate(cfg, &s)
}

/// Half-duplex amplify-and-forward with TSR, PSR or IRR harvesting.
pub fn hd_af_outage(cfg: &SystemConfig, eh: Harvesting) -> Result<OutageEstimate> {
    evaluate(cfg, &Scenario::hd(Relaying::AmplifyForward, eh))
}

/// Full-duplex decode-and-forward with time switching (closed form).
pub fn fd_df_outage(cfg: &SystemConfig, tau: f64, pc_fraction: f64) -> Result<OutageEstimate> {
    let s = Scenario::fd(Relaying::DecodeForward, tau).with_pc_fraction(pc_fraction);
    evaluate(cfg, &s)
}

/// Full-duplex amplify-and-forward with time switching.
pub fn fd_af_outage(cfg: &SystemConfig, tau: f64) -> Result<OutageEstimate> {
    evaluate(cfg, &Scenario::fd(Relaying::AmplifyForward, tau))
}

#[inline]
fn cdf(ch: &crate::lognormal::ChannelSpec, x: f64) -> f64 {
    q_function(-ch.standardize(x))
}

fn df_kernel(model: &LinkModel, v: f64, quad: &QuadSpec) -> Result<f64> {
    let cfg = model.config();
    let k = model.df_gains().ok_or_else(|| wrong_kernel(model))?;
    let lower = v / k.kappa_r;
    let relay_outage = cdf(&cfg.ch1, lower);
    let ch2 = cfg.ch2;
    let dest_outage = integrate_lognormal_weighted(
        |z| cdf(&ch2, v / (k.kappa_d * z)),
        &cfg.ch1,
        lower,
        f64::INFINITY,
        quad,
    )?;
    Ok(relay_outage + dest_outage)
}

fn af_kernel(model: &LinkModel, v: f64, quad: &QuadSpec) -> Result<f64> {
    let cfg = model.config();
    let c = model.af_coefficients().ok_or_else(|| wrong_kernel(model))?;
    let lower = v * c.b / c.a;
    let below = cdf(&cfg.ch1, lower);
    let ch2 = cfg.ch2;
    let above = integrate_lognormal_weighted(
        |z| {
            let denom = c.a * z - v * c.b;
            if denom <= 0.0 {
                1.0
            } else {
                cdf(&ch2, v * c.c / denom)
            }
        },
        &cfg.ch1,
        lower,
        f64::INFINITY,
        quad,
    )?;
    Ok(below + above)
}

fn fd_parts(model: &LinkModel) -> (f64, f64) {
    let cfg = model.config();
    let tau = match model.scenario().eh {
        Harvesting::TimeSwitching { tau } => tau,
        _ => unreachable!("validated full-duplex scenario"),
    };
    (tau, cfg.eta * tau / (1.0 - tau))
}

fn fd_df_closed_form(model: &LinkModel, v: f64) -> f64 {
    let cfg = model.config();
    let (tau, k) = fd_parts(model);
    // Pr{W ≤ (1−τ)/(ητv)}
    let relay_ok = q_function((XI * (k * v).ln() + cfg.chg.sq_mean_db()) / cfg.chg.sq_std_db());
    let delta = (1.0 - tau) * cfg.loss1() * cfg.loss2() * cfg.sigma_d2_w * v
        / (model.scenario().power_scale() * cfg.eta * tau * cfg.ps_watts);
    let dest_ok = product_ccdf_unchecked(delta, &cfg.ch1, &cfg.ch2);
    1.0 - relay_ok * dest_ok
}

fn fd_af_integral(model: &LinkModel, v: f64, quad: &QuadSpec) -> Result<f64> {
    let cfg = *model.config();
    let (_, k) = fd_parts(model);
    let noise = cfg.relay_noise(model.scenario().eh);
    let scale = cfg.loss1() * cfg.loss2() * v * noise / cfg.ps_watts;
    let upper = 1.0 / (k * v);
    let success = integrate_lognormal_weighted(
        |w| {
            let room = 1.0 - k * v * w;
            if room <= 0.0 {
                // Γ(w) → ∞ at w = 1/(kv); the CCDF limit is 0
                0.0
            } else {
                product_ccdf_unchecked(scale * (1.0 / k + w) / room, &cfg.ch1, &cfg.ch2)
            }
        },
        &cfg.chg,
        0.0,
        upper,
        quad,
    )?;
    Ok(1.0 - success)
}

fn wrong_kernel(model: &LinkModel) -> OutageError {
    OutageError::Scenario(format!("no half-duplex kernel for {}", model.scenario()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAUS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

    fn all_scenarios(p: f64) -> Vec<Scenario> {
        let mut v = Vec::new();
        for relay in [Relaying::DecodeForward, Relaying::AmplifyForward] {
            v.push(Scenario::hd(relay, Harvesting::TimeSwitching { tau: p }));
            v.push(Scenario::hd(relay, Harvesting::PowerSplitting { rho: p }));
            v.push(Scenario::hd(relay, Harvesting::Ideal));
            v.push(Scenario::fd(relay, p));
        }
        v
    }

    #[test]
    fn zero_threshold_gives_zero() {
        let cfg = SystemConfig {
            cth: 0.0,
            ..SystemConfig::default()
        };
        for s in all_scenarios(0.4) {
            assert_eq!(evaluate(&cfg, &s).unwrap().value, 0.0, "{s}");
        }
    }

    #[test]
    fn vanishing_harvest_time_saturates() {
        let cfg = SystemConfig::default();
        let o = hd_df_outage(&cfg, Harvesting::TimeSwitching { tau: 1e-6 }, 0.0).unwrap();
        assert!(o.value > 0.999);
        assert_eq!(fd_df_outage(&cfg, 1.0 - 1e-9, 0.0).unwrap().value, 1.0);
    }

    #[test]
    fn fd_df_matches_direct_probability_form() {
        // 1 − F̄_W-complement·F̄_Z, written through sq_gain_cdf and product_ccdf
        let cfg = SystemConfig {
            chg: crate::lognormal::ChannelSpec::new(3.0, 5f64.sqrt()).unwrap(),
            ..SystemConfig::default()
        };
        let tau = 0.01;
        let v = (cfg.cth / (1.0 - tau)).exp2() - 1.0;
        let w_ok =
            crate::lognormal::sq_gain_cdf((1.0 - tau) / (cfg.eta * tau * v), &cfg.chg).unwrap();
        let delta = (1.0 - tau) * 625.0 * cfg.sigma_d2_w * v / (cfg.eta * tau * cfg.ps_watts);
        let z_ok = crate::lognormal::product_ccdf(delta, &cfg.ch1, &cfg.ch2).unwrap();
        let got = fd_df_outage(&cfg, tau, 0.0).unwrap().value;
        assert!((got - (1.0 - w_ok * z_ok)).abs() < 1e-14);
    }

    #[test]
    fn fd_af_degenerate_loopback_limit() {
        // W concentrated far below 1/(kv): outage is the product-CCDF event at w ≈ 0
        let cfg = SystemConfig {
            chg: crate::lognormal::ChannelSpec::new(-60.0, 0.01).unwrap(),
            ..SystemConfig::default()
        };
        let tau = 0.3;
        let o = fd_af_outage(&cfg, tau).unwrap().value;
        let k = cfg.eta * tau / (1.0 - tau);
        let v = (cfg.cth / (1.0 - tau)).exp2() - 1.0;
        let w = 1e-12;
        let gamma = cfg.loss1() * cfg.loss2() * v * 0.005 * (1.0 / k + w)
            / (cfg.ps_watts * (1.0 - k * v * w));
        let want = 1.0 - crate::lognormal::product_ccdf(gamma, &cfg.ch1, &cfg.ch2).unwrap();
        assert!((o - want).abs() < 1e-8, "{o} vs {want}");
    }

    #[test]
    fn df_never_worse_than_af() {
        let cfg = SystemConfig::default();
        for p in TAUS {
            for eh in [
                Harvesting::TimeSwitching { tau: p },
                Harvesting::PowerSplitting { rho: p },
            ] {
                let df = hd_df_outage(&cfg, eh, 0.0).unwrap().value;
                let af = hd_af_outage(&cfg, eh).unwrap().value;
                assert!(df <= af + 1e-9, "{eh:?}: {df} > {af}");
            }
        }
    }

    #[test]
    fn monotone_in_threshold_and_power() {
        for s in all_scenarios(0.3) {
            let mut prev = 0.0;
            for cth in [0.5, 1.0, 2.0, 4.0] {
                let o = evaluate(
                    &SystemConfig {
                        cth,
                        ..SystemConfig::default()
                    },
                    &s,
                )
                .unwrap()
                .value;
                assert!(o + 1e-9 >= prev, "{s} cth={cth}");
                prev = o;
            }
            let mut prev = 1.0;
            for ps in [0.5, 1.0, 5.0, 10.0] {
                let o = evaluate(
                    &SystemConfig {
                        ps_watts: ps,
                        ..SystemConfig::default()
                    },
                    &s,
                )
                .unwrap()
                .value;
                assert!(o <= prev + 1e-9, "{s} ps={ps}");
                prev = o;
            }
        }
    }

    #[test]
    fn af_decreases_with_source_power() {
        let mut prev = 1.0;
        for ps in [1.0, 10.0, 100.0] {
            let cfg = SystemConfig {
                ps_watts: ps,
                ..SystemConfig::default()
            };
            let o = hd_af_outage(&cfg, Harvesting::Ideal).unwrap().value;
            assert!(o < prev);
            prev = o;
        }
    }

    #[test]
    fn invalid_inputs_propagate() {
        let cfg = SystemConfig::default();
        assert!(hd_df_outage(&cfg, Harvesting::TimeSwitching { tau: 1.2 }, 0.0).is_err());
        assert!(fd_af_outage(&cfg, 0.0).is_err());
        assert!(hd_df_outage(&cfg, Harvesting::Ideal, 1.0).is_err());
    }

    #[test]
    fn monte_carlo_estimate_helpers() {
        let e = OutageEstimate::from_counts(25, 100);
        assert_eq!(e.value, 0.25);
        assert!((e.stderr.unwrap() - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-16);
        assert!(!e.is_degenerate());
        assert!(OutageEstimate::from_counts(0, 100).is_degenerate());
        assert!(!OutageEstimate::analytic(0.0).is_degenerate());
    }
}
