//! Analytic evaluators against the Monte Carlo simulator on off-default
//! parameter sets, including unequal hop statistics and a processing cost.

use relay_outage::analytic::evaluate;
use relay_outage::montecarlo::{estimate_outage, McPlan};
use relay_outage::{ChannelSpec, Harvesting, Relaying, Scenario, SystemConfig};

const TRIALS: u64 = 400_000;

fn check(label: &str, cfg: &SystemConfig, s: &Scenario, seed: u64) {
    let a = evaluate(cfg, s).unwrap().value;
    let mc = estimate_outage(cfg, s, &McPlan::new(TRIALS, seed)).unwrap();
    let se = mc.stderr.unwrap();
    let tol = (3.0 * se).max(1e-3);
    println!(
        "{label:<28} {s:<10} analytic {a:.6} mc {:.6} ± {se:.1e}",
        mc.value
    );
    assert!(
        (a - mc.value).abs() <= tol,
        "{label} {s}: analytic {a} vs mc {} (tol {tol})",
        mc.value
    );
}

fn asymmetric() -> SystemConfig {
    SystemConfig {
        ps_watts: 3.0,
        eta: 0.8,
        d1_m: 4.0,
        d2_m: 6.0,
        cth: 1.0,
        ch1: ChannelSpec::new(5.0, 1.5).unwrap(),
        ch2: ChannelSpec::new(1.0, 3.0).unwrap(),
        chg: ChannelSpec::new(-2.0, 2.5).unwrap(),
        ..SystemConfig::default()
    }
}

#[test]
fn half_duplex_asymmetric_channels() {
    let cfg = asymmetric();
    let mut seed = 100;
    for relay in [Relaying::DecodeForward, Relaying::AmplifyForward] {
        for eh in [
            Harvesting::TimeSwitching { tau: 0.15 },
            Harvesting::TimeSwitching { tau: 0.4 },
            Harvesting::PowerSplitting { rho: 0.3 },
            Harvesting::PowerSplitting { rho: 0.75 },
            Harvesting::Ideal,
        ] {
            seed += 1;
            check("asymmetric", &cfg, &Scenario::hd(relay, eh), seed);
        }
    }
}

#[test]
fn full_duplex_asymmetric_channels() {
    let cfg = asymmetric();
    for (i, tau) in [0.02, 0.1, 0.3, 0.6].into_iter().enumerate() {
        check(
            "asymmetric",
            &cfg,
            &Scenario::fd(Relaying::DecodeForward, tau),
            200 + i as u64,
        );
        check(
            "asymmetric",
            &cfg,
            &Scenario::fd(Relaying::AmplifyForward, tau),
            300 + i as u64,
        );
    }
}

#[test]
fn processing_cost_in_both_paths() {
    let cfg = SystemConfig {
        ps_watts: 5.0,
        ..SystemConfig::default()
    };
    for (i, pc) in [0.01, 0.02, 0.3].into_iter().enumerate() {
        let seed = 400 + i as u64;
        check(
            "cost",
            &cfg,
            &Scenario::hd(Relaying::DecodeForward, Harvesting::Ideal).with_pc_fraction(pc),
            seed,
        );
        check(
            "cost",
            &cfg,
            &Scenario::hd(
                Relaying::DecodeForward,
                Harvesting::TimeSwitching { tau: 0.3 },
            )
            .with_pc_fraction(pc),
            seed,
        );
        check(
            "cost",
            &cfg,
            &Scenario::fd(Relaying::DecodeForward, 0.05).with_pc_fraction(pc),
            seed,
        );
    }
}

#[test]
fn low_outage_regime() {
    let cfg = SystemConfig {
        ps_watts: 20.0,
        cth: 0.5,
        ..SystemConfig::default()
    };
    for (i, s) in [
        Scenario::hd(
            Relaying::DecodeForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        ),
        Scenario::hd(
            Relaying::AmplifyForward,
            Harvesting::PowerSplitting { rho: 0.5 },
        ),
        Scenario::hd(
            Relaying::AmplifyForward,
            Harvesting::TimeSwitching { tau: 0.3 },
        ),
        Scenario::fd(Relaying::AmplifyForward, 0.2),
    ]
    .iter()
    .enumerate()
    {
        check("low-outage", &cfg, s, 500 + i as u64);
    }
}

#[test]
fn ten_million_trial_reference_points() {
    let cfg = SystemConfig::default();
    let mut fd = cfg;
    fd.chg.sigma_db = 5f64.sqrt();
    for (cfg, s, seed) in [
        (
            cfg,
            Scenario::hd(
                Relaying::DecodeForward,
                Harvesting::TimeSwitching { tau: 0.5 },
            ),
            600,
        ),
        (fd, Scenario::fd(Relaying::DecodeForward, 0.01), 601),
        (fd, Scenario::fd(Relaying::AmplifyForward, 0.01), 602),
    ] {
        let a = evaluate(&cfg, &s).unwrap().value;
        let mc = estimate_outage(&cfg, &s, &McPlan::new(10_000_000, seed)).unwrap();
        let se = mc.stderr.unwrap();
        println!(
            "reference {s:<10} analytic {a:.7} mc {:.7} ± {se:.1e}",
            mc.value
        );
        assert!(
            (a - mc.value).abs() <= 3.0 * se + 1e-9,
            "{s}: {a} vs {}",
            mc.value
        );
    }
}
