//! Signal model shared by the analytic and Monte Carlo paths.
//!
//! Covers the relay's harvested transmit power, the end-to-end SNRs, the
//! instantaneous capacities, and the outage event for half- and full-duplex
//! relays with decode-and-forward or amplify-and-forward processing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, OutageError, Result};
use crate::lognormal::ChannelSpec;

/// Physical link parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Source transmit power (W).
    pub ps_watts: f64,
    /// Energy-harvesting efficiency in (0, 1].
    pub eta: f64,
    /// Path-loss exponent.
    pub path_loss_exp: f64,
    /// Source-to-relay distance (m).
    pub d1_m: f64,
    /// Relay-to-destination distance (m).
    pub d2_m: f64,
    /// Relay antenna noise variance (W).
    pub sigma_a2_w: f64,
    /// Relay conversion noise variance (W).
    pub sigma_c2_w: f64,
    /// Destination noise variance (W).
    pub sigma_d2_w: f64,
    /// Capacity threshold (bps/Hz).
    pub cth: f64,
    pub ch1: ChannelSpec,
    pub ch2: ChannelSpec,
    /// Residual loop-back interference channel (full duplex only).
    pub chg: ChannelSpec,
}

impl Default for SystemConfig {
    /// The reference parameter set: 1 W source, unit efficiency, free-space
    /// exponent, 5 m hops, `Cth = 2`, `σr² = σd² = 2σa² = 2σc² = 0.005 W`,
    /// `μ = 3 dB`, `σ² = 4 dB` on both hops and the loop-back channel.
    fn default() -> Self {
        let ch = ChannelSpec {
            mu_db: 3.0,
            sigma_db: 2.0,
        };
        Self {
            ps_watts: 1.0,
            eta: 1.0,
            path_loss_exp: 2.0,
            d1_m: 5.0,
            d2_m: 5.0,
            sigma_a2_w: 0.0025,
            sigma_c2_w: 0.0025,
            sigma_d2_w: 0.005,
            cth: 2.0,
            ch1: ch,
            ch2: ch,
            chg: ch,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(domain(field, v, "must be > 0"))
            }
        }
        positive("ps_watts", self.ps_watts)?;
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(domain("eta", self.eta, "must lie in (0, 1]"));
        }
        if !(self.path_loss_exp >= 1.0 && self.path_loss_exp.is_finite()) {
            return Err(domain("path_loss_exp", self.path_loss_exp, "must be >= 1"));
        }
        positive("d1_m", self.d1_m)?;
        positive("d2_m", self.d2_m)?;
        positive("sigma_a2_w", self.sigma_a2_w)?;
        positive("sigma_c2_w", self.sigma_c2_w)?;
        positive("sigma_d2_w", self.sigma_d2_w)?;
        if !(self.cth >= 0.0 && self.cth.is_finite()) {
            return Err(domain("cth", self.cth, "must be >= 0"));
        }
        self.ch1.validate()?;
        self.ch2.validate()?;
        self.chg.validate()?;
        Ok(())
    }

    /// `d1^m`
    #[inline]
    pub fn loss1(&self) -> f64 {
        self.d1_m.powf(self.path_loss_exp)
    }

    /// `d2^m`
    #[inline]
    pub fn loss2(&self) -> f64 {
        self.d2_m.powf(self.path_loss_exp)
    }

    /// Relay-side noise variance for the given harvesting protocol.
    ///
    /// Power splitting scales the antenna noise by the information branch
    /// `(1−ρ)`; the other protocols see `σa² + σc²`.
    pub fn relay_noise(&self, eh: Harvesting) -> f64 {
        match eh {
            Harvesting::PowerSplitting { rho } => (1.0 - rho) * self.sigma_a2_w + self.sigma_c2_w,
            _ => self.sigma_a2_w + self.sigma_c2_w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Duplex {
    Half,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relaying {
    DecodeForward,
    AmplifyForward,
}

/// Energy-harvesting protocol at the relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Harvesting {
    /// Fraction `tau` of each frame is spent harvesting.
    TimeSwitching { tau: f64 },
    /// Fraction `rho` of received power goes to the harvester.
    PowerSplitting { rho: f64 },
    /// Harvests and decodes the same signal.
    Ideal,
}

impl Harvesting {
    /// The free protocol parameter (`tau` or `rho`), if any.
    pub fn param(&self) -> Option<f64> {
        match *self {
            Harvesting::TimeSwitching { tau } => Some(tau),
            Harvesting::PowerSplitting { rho } => Some(rho),
            Harvesting::Ideal => None,
        }
    }

    /// Same protocol with its free parameter replaced.
    pub fn with_param(&self, p: f64) -> Self {
        match self {
            Harvesting::TimeSwitching { .. } => Harvesting::TimeSwitching { tau: p },
            Harvesting::PowerSplitting { .. } => Harvesting::PowerSplitting { rho: p },
            Harvesting::Ideal => Harvesting::Ideal,
        }
    }
}

/// One system variant: duplex mode, relay protocol, harvesting protocol and
/// the decode-and-forward processing-cost fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub duplex: Duplex,
    pub relay: Relaying,
    pub eh: Harvesting,
    /// Fraction of harvested power consumed by DF processing, in [0, 1).
    pub pc_fraction: f64,
}

impl Scenario {
    pub fn new(duplex: Duplex, relay: Relaying, eh: Harvesting) -> Self {
        Self {
            duplex,
            relay,
            eh,
            pc_fraction: 0.0,
        }
    }

    pub fn hd(relay: Relaying, eh: Harvesting) -> Self {
        Self::new(Duplex::Half, relay, eh)
    }

    pub fn fd(relay: Relaying, tau: f64) -> Self {
        Self::new(Duplex::Full, relay, Harvesting::TimeSwitching { tau })
    }

    pub fn with_pc_fraction(mut self, c: f64) -> Self {
        self.pc_fraction = c;
        self
    }

    pub fn with_eh_param(mut self, p: f64) -> Self {
        self.eh = self.eh.with_param(p);
        self
    }

    pub fn is_df(&self) -> bool {
        self.relay == Relaying::DecodeForward
    }

    pub fn validate(&self) -> Result<()> {
        match self.eh {
            Harvesting::TimeSwitching { tau } => check_open_unit("tau", tau)?,
            Harvesting::PowerSplitting { rho } => check_open_unit("rho", rho)?,
            Harvesting::Ideal => {}
        }
        if self.duplex == Duplex::Full && !matches!(self.eh, Harvesting::TimeSwitching { .. }) {
            return Err(OutageError::Scenario(format!(
                "full-duplex relaying is only defined with time switching, got {}",
                self
            )));
        }
        if !(self.pc_fraction >= 0.0 && self.pc_fraction < 1.0) {
            return Err(domain(
                "pc_fraction",
                self.pc_fraction,
                "must lie in [0, 1)",
            ));
        }
        if self.pc_fraction > 0.0 && self.relay == Relaying::AmplifyForward {
            return Err(OutageError::Scenario(
                "processing cost applies to decode-and-forward relays only".into(),
            ));
        }
        Ok(())
    }

    /// Usable fraction of harvested power, `1 − c` for DF and 1 for AF.
    #[inline]
    pub fn power_scale(&self) -> f64 {
        match self.relay {
            Relaying::DecodeForward => 1.0 - self.pc_fraction,
            Relaying::AmplifyForward => 1.0,
        }
    }

    /// SNR threshold `v` such that the per-hop capacity falls below `cth`
    /// exactly when `γ < v`. Infinite when the prefactor underflows.
    pub fn snr_threshold(&self, cth: f64) -> f64 {
        let exponent = match (self.duplex, self.eh) {
            (Duplex::Half, Harvesting::TimeSwitching { tau }) => 2.0 * cth / (1.0 - tau),
            (Duplex::Half, _) => 2.0 * cth,
            (Duplex::Full, Harvesting::TimeSwitching { tau }) => cth / (1.0 - tau),
            (Duplex::Full, _) => cth,
        };
        if exponent == 0.0 {
            0.0
        } else {
            exponent.exp2() - 1.0
        }
    }

    /// Capacity prefactor: `(1−τ)/2` (HD-TSR), `1/2` (HD-PSR/IRR), `1−τ` (FD).
    pub fn capacity_prefactor(&self) -> f64 {
        match (self.duplex, self.eh) {
            (Duplex::Half, Harvesting::TimeSwitching { tau }) => 0.5 * (1.0 - tau),
            (Duplex::Half, _) => 0.5,
            (Duplex::Full, Harvesting::TimeSwitching { tau }) => 1.0 - tau,
            (Duplex::Full, _) => 1.0,
        }
    }
}

fn check_open_unit(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(domain(field, v, "must lie in (0, 1)"))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.duplex {
            Duplex::Half => "HD",
            Duplex::Full => "FD",
        };
        let r = match self.relay {
            Relaying::DecodeForward => "DF",
            Relaying::AmplifyForward => "AF",
        };
        let e = match self.eh {
            Harvesting::TimeSwitching { .. } => "TSR",
            Harvesting::PowerSplitting { .. } => "PSR",
            Harvesting::Ideal => "IRR",
        };
        write!(f, "{d}-{r}-{e}")
    }
}

/// One joint realization of squared channel gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadeSample {
    /// `h1²`
    pub x: f64,
    /// `h2²`
    pub y: f64,
    /// `g²`, ignored by half-duplex scenarios.
    pub w: f64,
}

impl FadeSample {
    pub fn new(x: f64, y: f64, w: f64) -> Self {
        Self { x, y, w }
    }
}

/// Relay- and destination-side SNRs. `relay` is `None` for AF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPair {
    pub relay: Option<f64>,
    pub dest: f64,
}

/// Per-hop capacities in bps/Hz. `relay` is `None` for AF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacities {
    pub relay: Option<f64>,
    pub dest: f64,
}

/// DF gains with `γr = kappa_r·X` and `γd = kappa_d·X·Y` (half duplex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfGains {
    pub kappa_r: f64,
    pub kappa_d: f64,
}

/// AF coefficients with `γd = a·X·Y/(b·Y + c)` (half duplex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A validated `(SystemConfig, Scenario)` pair with the per-sample
/// computations of the signal model.
#[derive(Debug, Clone, Copy)]
pub struct LinkModel {
    cfg: SystemConfig,
    scenario: Scenario,
    loss1: f64,
    loss2: f64,
    relay_noise: f64,
}

impl LinkModel {
    pub fn new(cfg: &SystemConfig, scenario: &Scenario) -> Result<Self> {
        cfg.validate()?;
        scenario.validate()?;
        Ok(Self {
            cfg: *cfg,
            scenario: *scenario,
            loss1: cfg.loss1(),
            loss2: cfg.loss2(),
            relay_noise: cfg.relay_noise(scenario.eh),
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Relay transmit power per unit `h1²` before the processing cost.
    fn harvest_coefficient(&self) -> f64 {
        let c = &self.cfg;
        let base = c.eta * c.ps_watts / self.loss1;
        match (self.scenario.duplex, self.scenario.eh) {
            // E_H = ητT·Ps·x/d1^m spent over (1−τ)T/2
            (Duplex::Half, Harvesting::TimeSwitching { tau }) => 2.0 * tau * base / (1.0 - tau),
            (Duplex::Half, Harvesting::PowerSplitting { rho }) => rho * base,
            (Duplex::Half, Harvesting::Ideal) => base,
            // spent over (1−τ)T
            (Duplex::Full, Harvesting::TimeSwitching { tau }) => tau * base / (1.0 - tau),
            (Duplex::Full, _) => unreachable!("validated scenario"),
        }
    }

    /// Relay transmit power (W) for first-hop squared gain `x`, including the
    /// DF processing cost.
    #[inline]
    pub fn relay_power(&self, x: f64) -> f64 {
        self.scenario.power_scale() * self.harvest_coefficient() * x
    }

    /// Source power reaching the relay's information receiver.
    fn info_power(&self) -> f64 {
        match self.scenario.eh {
            Harvesting::PowerSplitting { rho } => (1.0 - rho) * self.cfg.ps_watts,
            _ => self.cfg.ps_watts,
        }
    }

    pub fn snr_pair(&self, fade: &FadeSample) -> SnrPair {
        let c = &self.cfg;
        let (x, y, w) = (fade.x, fade.y, fade.w);
        match (self.scenario.duplex, self.scenario.relay) {
            (Duplex::Half, Relaying::DecodeForward) => SnrPair {
                relay: Some(self.info_power() * x / (self.loss1 * self.relay_noise)),
                dest: self.relay_power(x) * y / (self.loss2 * c.sigma_d2_w),
            },
            (Duplex::Half, Relaying::AmplifyForward) => {
                // first-hop SNR and second-hop SNR combine harmonically
                let first = self.info_power() * x / (self.loss1 * self.relay_noise);
                let second = self.relay_power(x) * y / (self.loss2 * c.sigma_d2_w);
                SnrPair {
                    relay: None,
                    dest: first * second / (first + second),
                }
            }
            (Duplex::Full, Relaying::DecodeForward) => {
                // loop-back interference from the uncosted harvested power
                let pr = self.harvest_coefficient() * x;
                SnrPair {
                    relay: Some(c.ps_watts * x / (pr * self.loss1 * w)),
                    dest: self.relay_power(x) * y / (self.loss2 * c.sigma_d2_w),
                }
            }
            (Duplex::Full, Relaying::AmplifyForward) => {
                let k = self.fd_k();
                let xy = x * y;
                SnrPair {
                    relay: None,
                    dest: c.ps_watts * xy
                        / (self.loss1 * self.loss2 * self.relay_noise * (1.0 / k + w)
                            + c.ps_watts * k * w * xy),
                }
            }
        }
    }

    /// `k = ητ/(1−τ)` for full-duplex time switching.
    fn fd_k(&self) -> f64 {
        match self.scenario.eh {
            Harvesting::TimeSwitching { tau } => self.cfg.eta * tau / (1.0 - tau),
            _ => unreachable!("validated scenario"),
        }
    }

    pub fn capacities(&self, fade: &FadeSample) -> Capacities {
        let snr = self.snr_pair(fade);
        let pre = self.scenario.capacity_prefactor();
        Capacities {
            relay: snr.relay.map(|g| pre * g.ln_1p() / std::f64::consts::LN_2),
            dest: pre * snr.dest.ln_1p() / std::f64::consts::LN_2,
        }
    }

    /// Outage event: `min(Cr, Cd) < Cth` for DF, `Cd < Cth` for AF.
    #[inline]
    pub fn is_outage(&self, fade: &FadeSample) -> bool {
        let caps = self.capacities(fade);
        let worst = match caps.relay {
            Some(cr) => cr.min(caps.dest),
            None => caps.dest,
        };
        worst < self.cfg.cth
    }

    /// Half-duplex DF gains `(κr, κd)`, with `κd` scaled by the processing cost.
    pub fn df_gains(&self) -> Option<DfGains> {
        if self.scenario.duplex != Duplex::Half || self.scenario.relay != Relaying::DecodeForward {
            return None;
        }
        let kappa_r = self.info_power() / (self.loss1 * self.relay_noise);
        let kappa_d = self.relay_power(1.0) / (self.loss2 * self.cfg.sigma_d2_w);
        Some(DfGains { kappa_r, kappa_d })
    }

    /// Half-duplex AF coefficients `(A, B, C)` per protocol.
    pub fn af_coefficients(&self) -> Option<AfCoefficients> {
        if self.scenario.duplex != Duplex::Half || self.scenario.relay != Relaying::AmplifyForward {
            return None;
        }
        let c = &self.cfg;
        let (l1, l2) = (self.loss1, self.loss2);
        let coeffs = match self.scenario.eh {
            Harvesting::TimeSwitching { tau } => AfCoefficients {
                a: 2.0 * c.eta * tau * c.ps_watts,
                b: 2.0 * c.eta * tau * l1 * self.relay_noise,
                c: (1.0 - tau) * l1 * l2 * c.sigma_d2_w,
            },
            Harvesting::PowerSplitting { rho } => AfCoefficients {
                a: c.eta * rho * (1.0 - rho) * c.ps_watts,
                b: c.eta * rho * l1 * c.sigma_c2_w + c.eta * rho * (1.0 - rho) * l1 * c.sigma_a2_w,
                c: (1.0 - rho) * l1 * l2 * c.sigma_d2_w,
            },
            Harvesting::Ideal => AfCoefficients {
                a: c.eta * c.ps_watts,
                b: c.eta * l1 * self.relay_noise,
                c: l1 * l2 * c.sigma_d2_w,
            },
        };
        Some(coeffs)
    }
}

/// Relay transmit power (W) for first-hop squared gain `x`.
pub fn relay_power(cfg: &SystemConfig, scenario: &Scenario, x: f64) -> Result<f64> {
    check_fade_component("x", x)?;
    Ok(LinkModel::new(cfg, scenario)?.relay_power(x))
}

pub fn snr_pair(cfg: &SystemConfig, scenario: &Scenario, fade: &FadeSample) -> Result<SnrPair> {
    check_fade(scenario, fade)?;
    Ok(LinkModel::new(cfg, scenario)?.snr_pair(fade))
}

pub fn capacities(
    cfg: &SystemConfig,
    scenario: &Scenario,
    fade: &FadeSample,
) -> Result<Capacities> {
    check_fade(scenario, fade)?;
    Ok(LinkModel::new(cfg, scenario)?.capacities(fade))
}

/// 1 when the link is in outage for this fade, else 0.
pub fn outage_indicator(cfg: &SystemConfig, scenario: &Scenario, fade: &FadeSample) -> Result<u8> {
    check_fade(scenario, fade)?;
    Ok(LinkModel::new(cfg, scenario)?.is_outage(fade) as u8)
}

fn check_fade_component(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(field, v, "squared gain must be finite and > 0"))
    }
}

fn check_fade(scenario: &Scenario, fade: &FadeSample) -> Result<()> {
    check_fade_component("x", fade.x)?;
    check_fade_component("y", fade.y)?;
    if scenario.duplex == Duplex::Full {
        check_fade_component("w", fade.w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TSR: Harvesting = Harvesting::TimeSwitching { tau: 0.5 };

    fn unit() -> FadeSample {
        FadeSample::new(1.0, 1.0, 1.0)
    }

    #[test]
    fn relay_power_reference_values() {
        let cfg = SystemConfig::default();
        let hd = Scenario::hd(Relaying::DecodeForward, TSR);
        assert!((relay_power(&cfg, &hd, 1.0).unwrap() - 0.08).abs() < 1e-15);
        let fd = Scenario::fd(Relaying::DecodeForward, 0.5);
        assert!((relay_power(&cfg, &fd, 1.0).unwrap() - 0.04).abs() < 1e-15);
        let costed = hd.with_pc_fraction(0.02);
        assert!((relay_power(&cfg, &costed, 1.0).unwrap() - 0.98 * 0.08).abs() < 1e-15);
        let psr = Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 0.3 },
        );
        assert!((relay_power(&cfg, &psr, 2.0).unwrap() - 0.3 * 2.0 / 25.0).abs() < 1e-15);
        let irr = Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal);
        assert!((relay_power(&cfg, &irr, 1.0).unwrap() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_parameters_rejected() {
        let cfg = SystemConfig::default();
        for tau in [0.0, 1.0, 1.2, -0.1] {
            let s = Scenario::hd(Relaying::DecodeForward, Harvesting::TimeSwitching { tau });
            assert!(matches!(
                relay_power(&cfg, &s, 1.0),
                Err(OutageError::Domain { field: "tau", .. })
            ));
        }
        let s = Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 1.0 },
        );
        assert!(relay_power(&cfg, &s, 1.0).is_err());
        let fd_psr = Scenario::new(
            Duplex::Full,
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        );
        assert!(matches!(fd_psr.validate(), Err(OutageError::Scenario(_))));
        let af_cost = Scenario::hd(Relaying::AmplifyForward, TSR).with_pc_fraction(0.01);
        assert!(matches!(af_cost.validate(), Err(OutageError::Scenario(_))));
        let bad_cfg = SystemConfig {
            eta: 1.5,
            ..SystemConfig::default()
        };
        assert!(bad_cfg.validate().is_err());
        let bad_fade = FadeSample::new(0.0, 1.0, 1.0);
        assert!(snr_pair(&cfg, &Scenario::hd(Relaying::DecodeForward, TSR), &bad_fade).is_err());
    }

    #[test]
    fn hd_df_tsr_snrs_and_capacities() {
        let cfg = SystemConfig::default();
        let s = Scenario::hd(Relaying::DecodeForward, TSR);
        let snr = snr_pair(&cfg, &s, &unit()).unwrap();
        assert!((snr.relay.unwrap() - 8.0).abs() < 1e-12);
        assert!((snr.dest - 0.64).abs() < 1e-12);
        let caps = capacities(&cfg, &s, &unit()).unwrap();
        assert!((caps.relay.unwrap() - 0.792_481_250_360_578_1).abs() < 1e-12);
        assert!((caps.dest - 0.178_423_953_710_839_7).abs() < 1e-12);
        assert_eq!(outage_indicator(&cfg, &s, &unit()).unwrap(), 1);
    }

    #[test]
    fn fd_df_relay_snr() {
        let cfg = SystemConfig::default();
        let s = Scenario::fd(Relaying::DecodeForward, 0.5);
        let snr = snr_pair(&cfg, &s, &FadeSample::new(3.0, 0.7, 2.0)).unwrap();
        assert!((snr.relay.unwrap() - 0.5).abs() < 1e-12);
        let costed = snr_pair(
            &cfg,
            &s.with_pc_fraction(0.01),
            &FadeSample::new(3.0, 0.7, 2.0),
        )
        .unwrap();
        assert_eq!(costed.relay, snr.relay);
        assert!((costed.dest - 0.99 * snr.dest).abs() < 1e-15);
    }

    #[test]
    fn listed_closed_forms_match_signal_chain() {
        let cfg = SystemConfig {
            eta: 0.7,
            ps_watts: 2.0,
            d1_m: 3.0,
            d2_m: 8.0,
            path_loss_exp: 2.7,
            ..SystemConfig::default()
        };
        let (l1, l2) = (cfg.loss1(), cfg.loss2());
        let (ps, eta, sa, sc, sd) = (
            cfg.ps_watts,
            cfg.eta,
            cfg.sigma_a2_w,
            cfg.sigma_c2_w,
            cfg.sigma_d2_w,
        );
        let sr = sa + sc;
        let f = FadeSample::new(1.7, 0.4, 2.2);
        let (x, y, w) = (f.x, f.y, f.w);
        let (tau, rho) = (0.3, 0.6);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-13 * b.abs();

        let s = Scenario::hd(Relaying::AmplifyForward, Harvesting::TimeSwitching { tau });
        let g = snr_pair(&cfg, &s, &f).unwrap().dest;
        assert!(close(
            g,
            2.0 * eta * tau * ps * x * y
                / (2.0 * eta * tau * l1 * sr * y + (1.0 - tau) * l1 * l2 * sd)
        ));

        let s = Scenario::hd(Relaying::AmplifyForward, Harvesting::PowerSplitting { rho });
        let g = snr_pair(&cfg, &s, &f).unwrap().dest;
        let want = eta * rho * (1.0 - rho) * ps * x * y
            / (eta * rho * l1 * sc * y
                + eta * rho * (1.0 - rho) * l1 * sa * y
                + (1.0 - rho) * l1 * l2 * sd);
        assert!(close(g, want));

        let s = Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal);
        let g = snr_pair(&cfg, &s, &f).unwrap().dest;
        assert!(close(
            g,
            eta * ps * x * y / (eta * l1 * sr * y + l1 * l2 * sd)
        ));

        let s = Scenario::hd(Relaying::DecodeForward, Harvesting::PowerSplitting { rho });
        let p = snr_pair(&cfg, &s, &f).unwrap();
        assert!(close(
            p.relay.unwrap(),
            (1.0 - rho) * ps * x / (l1 * ((1.0 - rho) * sa + sc))
        ));
        assert!(close(p.dest, eta * rho * ps * x * y / (l1 * l2 * sd)));

        let s = Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal);
        let p = snr_pair(&cfg, &s, &f).unwrap();
        assert!(close(p.relay.unwrap(), ps * x / (l1 * sr)));
        assert!(close(p.dest, eta * ps * x * y / (l1 * l2 * sd)));

        let s = Scenario::fd(Relaying::DecodeForward, tau);
        let p = snr_pair(&cfg, &s, &f).unwrap();
        assert!(close(p.relay.unwrap(), (1.0 - tau) / (eta * tau * w)));
        assert!(close(
            p.dest,
            eta * tau * ps * x * y / ((1.0 - tau) * l1 * l2 * sd)
        ));

        let s = Scenario::fd(Relaying::AmplifyForward, tau);
        let k = eta * tau / (1.0 - tau);
        let g = snr_pair(&cfg, &s, &f).unwrap().dest;
        assert!(close(
            g,
            ps * x * y / (l1 * l2 * sr * (1.0 / k + w) + ps * k * w * x * y)
        ));
    }

    #[test]
    fn coefficient_forms_agree_with_snrs() {
        let cfg = SystemConfig::default();
        let f = FadeSample::new(2.3, 0.6, 1.0);
        for eh in [
            TSR,
            Harvesting::PowerSplitting { rho: 0.35 },
            Harvesting::Ideal,
        ] {
            let df = LinkModel::new(
                &cfg,
                &Scenario::hd(Relaying::DecodeForward, eh).with_pc_fraction(0.01),
            )
            .unwrap();
            let k = df.df_gains().unwrap();
            let snr = df.snr_pair(&f);
            assert!((k.kappa_r * f.x - snr.relay.unwrap()).abs() < 1e-12 * snr.relay.unwrap());
            assert!((k.kappa_d * f.x * f.y - snr.dest).abs() < 1e-12 * snr.dest);

            let af = LinkModel::new(&cfg, &Scenario::hd(Relaying::AmplifyForward, eh)).unwrap();
            let c = af.af_coefficients().unwrap();
            let g = af.snr_pair(&f).dest;
            assert!((c.a * f.x * f.y / (c.b * f.y + c.c) - g).abs() < 1e-12 * g);
        }
    }

    #[test]
    fn af_never_exceeds_single_hop_bounds() {
        let cfg = SystemConfig::default();
        let m = LinkModel::new(&cfg, &Scenario::hd(Relaying::AmplifyForward, TSR)).unwrap();
        let df = LinkModel::new(&cfg, &Scenario::hd(Relaying::DecodeForward, TSR)).unwrap();
        for &(x, y) in &[(0.1, 0.1), (1.0, 5.0), (40.0, 0.3), (1e3, 1e3)] {
            let f = FadeSample::new(x, y, 1.0);
            let d = df.snr_pair(&f);
            assert!(m.snr_pair(&f).dest < d.relay.unwrap().min(d.dest));
        }
        // ceiling as y grows
        let ceiling = cfg.ps_watts * 1.0 / (cfg.loss1() * cfg.relay_noise(TSR));
        let g = m.snr_pair(&FadeSample::new(1.0, 1e12, 1.0)).dest;
        assert!(g < ceiling && (ceiling - g) / ceiling < 1e-9);
    }

    #[test]
    fn capacity_edge_cases() {
        let cfg = SystemConfig::default();
        let hd = LinkModel::new(&cfg, &Scenario::hd(Relaying::DecodeForward, TSR)).unwrap();
        let fd = LinkModel::new(&cfg, &Scenario::fd(Relaying::DecodeForward, 0.5)).unwrap();
        // same τ: the FD prefactor is twice the HD-TSR one, so equal γ doubles capacity
        assert_eq!(
            fd.scenario().capacity_prefactor(),
            2.0 * hd.scenario().capacity_prefactor()
        );
        let tiny = FadeSample::new(1e-300, 1e-300, 1.0);
        assert!(hd.capacities(&tiny).dest >= 0.0 && hd.capacities(&tiny).dest < 1e-300);

        let zero = SystemConfig { cth: 0.0, ..cfg };
        let huge = SystemConfig { cth: 1e6, ..cfg };
        for s in [
            Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal),
            Scenario::fd(Relaying::AmplifyForward, 0.2),
        ] {
            assert_eq!(
                outage_indicator(&zero, &s, &FadeSample::new(0.01, 0.01, 9.0)).unwrap(),
                0
            );
            assert_eq!(
                outage_indicator(&huge, &s, &FadeSample::new(1e9, 1e9, 1e-9)).unwrap(),
                1
            );
        }
    }

    #[test]
    fn zero_cost_is_bitwise_identical() {
        let cfg = SystemConfig::default();
        let s = Scenario::hd(Relaying::DecodeForward, TSR);
        let a = LinkModel::new(&cfg, &s).unwrap();
        let b = LinkModel::new(&cfg, &s.with_pc_fraction(0.0)).unwrap();
        let f = FadeSample::new(0.77, 3.1, 1.0);
        assert_eq!(a.snr_pair(&f), b.snr_pair(&f));
    }

    #[test]
    fn thresholds() {
        let hd = Scenario::hd(Relaying::DecodeForward, TSR);
        assert_eq!(hd.snr_threshold(2.0), 255.0);
        assert_eq!(hd.snr_threshold(0.0), 0.0);
        let psr = Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        );
        assert_eq!(psr.snr_threshold(2.0), 15.0);
        let fd = Scenario::fd(Relaying::AmplifyForward, 0.5);
        assert_eq!(fd.snr_threshold(2.0), 15.0);
        let near_one = Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::TimeSwitching { tau: 1.0 - 1e-4 },
        );
        assert_eq!(near_one.snr_threshold(2.0), f64::INFINITY);
    }
}
