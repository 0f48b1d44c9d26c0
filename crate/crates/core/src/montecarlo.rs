//! Seeded Monte Carlo outage estimation.
//!
//! Trials are split into fixed-size blocks. Block `i` draws from ChaCha
//! stream `i` of the generator keyed by the plan's seed, so the estimate is
//! a function of `(seed, trials, block_size)` only and not of how blocks are
//! scheduled across threads. Blocks return exact outage counts, which are
//! summed as integers.

use serde::{Deserialize, Serialize};

use crate::analytic::OutageEstimate;
use crate::error::{domain, Result};
use crate::lognormal::GainSampler;
use crate::model::{FadeSample, LinkModel, Scenario, SystemConfig};

pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 16;
pub const MIN_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McPlan {
    pub trials: u64,
    pub seed: u64,
    pub block_size: u64,
}

impl McPlan {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    pub fn with_block_size(mut self, block_size: u64) -> Self {
        self.block_size = block_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(domain("trials", self.trials as f64, "must be >= 10000"));
        }
        if self.block_size == 0 {
            return Err(domain("block_size", 0.0, "must be > 0"));
        }
        Ok(())
    }

    pub fn block_count(&self) -> u64 {
        self.trials.div_ceil(self.block_size)
    }

    /// Trials in block `index`; the last block takes the remainder.
    pub fn block_len(&self, index: u64) -> u64 {
        let start = index * self.block_size;
        self.block_size.min(self.trials.saturating_sub(start))
    }
}

/// Fade realizations of block `index`, in draw order `(h1², h2², g²)`.
///
/// All three gains are drawn for every trial, including half-duplex ones,
/// so every scenario sees the same fades for the same plan.
pub fn block_fades<'a>(
    cfg: &'a SystemConfig,
    plan: &McPlan,
    index: u64,
) -> impl Iterator<Item = FadeSample> + 'a {
    let mut sampler = GainSampler::with_stream(plan.seed, index);
    (0..plan.block_len(index)).map(move |_| {
        let x = sampler.sample_sq_gain(&cfg.ch1);
        let y = sampler.sample_sq_gain(&cfg.ch2);
        let w = sampler.sample_sq_gain(&cfg.chg);
        FadeSample { x, y, w }
    })
}

/// Number of outage events in block `index`.
pub fn count_block(model: &LinkModel, plan: &McPlan, index: u64) -> u64 {
    block_fades(model.config(), plan, index)
        .filter(|f| model.is_outage(f))
        .count() as u64
}

/// Estimates the outage probability of `scenario` by simulation.
pub fn estimate_outage(
    cfg: &SystemConfig,
    scenario: &Scenario,
    plan: &McPlan,
) -> Result<OutageEstimate> {
    plan.validate()?;
    let model = LinkModel::new(cfg, scenario)?;
    let outages = count_blocks(&model, plan);
    Ok(OutageEstimate::from_counts(outages, plan.trials))
}

/// Same as [`estimate_outage`] but visits blocks in order on the calling thread.
pub fn estimate_outage_sequential(
    cfg: &SystemConfig,
    scenario: &Scenario,
    plan: &McPlan,
) -> Result<OutageEstimate> {
    plan.validate()?;
    let model = LinkModel::new(cfg, scenario)?;
    let outages = (0..plan.block_count())
        .map(|i| count_block(&model, plan, i))
        .sum();
    Ok(OutageEstimate::from_counts(outages, plan.trials))
}

/// DF estimate with the relay's transmit power reduced by `pc_fraction`.
pub fn estimate_outage_with_cost(
    cfg: &SystemConfig,
    scenario: &Scenario,
    pc_fraction: f64,
    plan: &McPlan,
) -> Result<OutageEstimate> {
    if !scenario.is_df() && pc_fraction > 0.0 {
        return Err(domain(
            "pc_fraction",
            pc_fraction,
            "processing cost applies to decode-and-forward only",
        ));
    }
    estimate_outage(cfg, &scenario.with_pc_fraction(pc_fraction), plan)
}

#[cfg(feature = "parallel")]
fn count_blocks(model: &LinkModel, plan: &McPlan) -> u64 {
    use rayon::prelude::*;
    (0..plan.block_count())
        .into_par_iter()
        .map(|i| count_block(model, plan, i))
        .sum()
}

#[cfg(not(feature = "parallel"))]
fn count_blocks(model: &LinkModel, plan: &McPlan) -> u64 {
    (0..plan.block_count())
        .map(|i| count_block(model, plan, i))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Harvesting, Relaying};

    fn tsr() -> Scenario {
        Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::TimeSwitching { tau: 0.3 },
        )
    }

    #[test]
    fn plan_blocks_cover_trials() {
        let p = McPlan::new(100_001, 1).with_block_size(1000);
        assert_eq!(p.block_count(), 101);
        assert_eq!(p.block_len(100), 1);
        assert_eq!(
            (0..p.block_count()).map(|i| p.block_len(i)).sum::<u64>(),
            100_001
        );
        let single = McPlan::new(20_000, 1);
        assert_eq!(single.block_count(), 1);
        assert_eq!(single.block_len(0), 20_000);
    }

    #[test]
    fn plan_validation() {
        assert!(McPlan::new(9_999, 0).validate().is_err());
        assert!(McPlan::new(10_000, 0)
            .with_block_size(0)
            .validate()
            .is_err());
        assert!(McPlan::new(10_000, 0).validate().is_ok());
    }

    #[test]
    fn zero_threshold_is_exactly_zero() {
        let cfg = SystemConfig {
            cth: 0.0,
            ..SystemConfig::default()
        };
        let e = estimate_outage(&cfg, &tsr(), &McPlan::new(20_000, 3)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.stderr, Some(0.0));
        assert!(e.is_degenerate());
    }

    #[test]
    fn deterministic_and_schedule_independent() {
        let cfg = SystemConfig::default();
        let plan = McPlan::new(50_000, 42).with_block_size(4096);
        let a = estimate_outage(&cfg, &tsr(), &plan).unwrap();
        let b = estimate_outage(&cfg, &tsr(), &plan).unwrap();
        let c = estimate_outage_sequential(&cfg, &tsr(), &plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.trials, Some(50_000));
    }

    #[test]
    fn cost_estimates() {
        let cfg = SystemConfig::default();
        let s = Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal);
        let plan = McPlan::new(100_000, 9);
        let base = estimate_outage(&cfg, &s, &plan).unwrap();
        let zero = estimate_outage_with_cost(&cfg, &s, 0.0, &plan).unwrap();
        assert_eq!(base, zero);
        let one = estimate_outage_with_cost(&cfg, &s, 0.01, &plan).unwrap();
        let two = estimate_outage_with_cost(&cfg, &s, 0.02, &plan).unwrap();
        assert!(zero.value <= one.value && one.value <= two.value);
        let af = Scenario::hd(Relaying::AmplifyForward, Harvesting::Ideal);
        assert!(estimate_outage_with_cost(&cfg, &af, 0.01, &plan).is_err());
        assert!(estimate_outage_with_cost(&cfg, &af, 0.0, &plan).is_ok());
    }
}
