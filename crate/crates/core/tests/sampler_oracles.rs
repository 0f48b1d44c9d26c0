use relay_outage::lognormal::{
    product_ccdf, q_function, sq_gain_cdf, ChannelSpec, GainSampler, XI,
};

#[test]
fn cdf_matches_empirical_cdf_of_ten_million_draws() {
    let ch = ChannelSpec::new(3.0, 2.0).unwrap();
    let mut s = GainSampler::new(2024);
    let n = 10_000_000u64;
    let below = (0..n).filter(|_| s.sample_sq_gain(&ch) <= 10.0).count() as f64;
    let emp = below / n as f64;
    let p = sq_gain_cdf(10.0, &ch).unwrap();
    let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    assert!((emp - p).abs() <= tol, "empirical {emp} vs {p} (tol {tol})");
}

#[test]
fn product_ccdf_matches_sampled_products() {
    let ch = ChannelSpec::new(3.0, 2.0).unwrap();
    let mut s = GainSampler::new(77);
    let n = 10_000_000u64;
    let above = (0..n)
        .filter(|_| s.sample_sq_gain(&ch) * s.sample_sq_gain(&ch) > 50.0)
        .count() as f64;
    let emp = above / n as f64;
    let p = product_ccdf(50.0, &ch, &ch).unwrap();
    let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    assert!((emp - p).abs() <= tol, "empirical {emp} vs {p} (tol {tol})");

    // sum of two i.i.d. dB-domain Gaussians: mean 2(μ+μ), variance 2·(2σ)²
    let direct = q_function((XI * 50f64.ln() - 12.0) / (4.0 * 2f64.sqrt()));
    assert!((direct - p).abs() < 1e-15);
}

#[test]
fn product_ccdf_unequal_channels_matches_sampler() {
    let a = ChannelSpec::new(1.0, 1.0).unwrap();
    let b = ChannelSpec::new(4.0, 3.0).unwrap();
    let mut s = GainSampler::new(5);
    let n = 4_000_000u64;
    let above = (0..n)
        .filter(|_| s.sample_sq_gain(&a) * s.sample_sq_gain(&b) > 30.0)
        .count() as f64;
    let emp = above / n as f64;
    let p = product_ccdf(30.0, &a, &b).unwrap();
    let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    assert!((emp - p).abs() <= tol, "empirical {emp} vs {p} (tol {tol})");
}

#[test]
fn empirical_cdf_within_kolmogorov_smirnov_bound() {
    let ch = ChannelSpec::new(-2.0, 3.0).unwrap();
    let mut s = GainSampler::new(31337);
    let n = 1_000_000usize;
    let mut draws: Vec<f64> = (0..n).map(|_| s.sample_sq_gain(&ch)).collect();
    draws.sort_by(f64::total_cmp);
    // c(α = 0.001) = 1.95
    let bound = 1.95 / (n as f64).sqrt();
    for &x in &[0.01, 0.1, 0.5, 1.0, 5.0] {
        let emp = draws.partition_point(|&d| d <= x) as f64 / n as f64;
        let p = sq_gain_cdf(x, &ch).unwrap();
        assert!((emp - p).abs() < bound, "x={x}: {emp} vs {p}");
    }
}
