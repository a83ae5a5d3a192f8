use contextlab_core::qrng::{
    biased_bits, chi_square_block_test, generate, ground_state, monobit_test, runs_test, test_battery, uniform_bits,
    von_neumann_bits, TranslationModel, ALPHA,
};
use std::f64::consts::PI;

fn freq(bits: &[bool]) -> f64 {
    bits.iter().filter(|&&b| b).count() as f64 / bits.len() as f64
}

fn three_sigma(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn equator_is_fair() {
    let n = 1_000_000;
    let s = generate(&ground_state(), TranslationModel::ideal(PI / 2.0), n, 8).unwrap();
    assert!((s.frequency() - 0.5).abs() <= 0.0015);
}

#[test]
fn malus_profile_is_monotone() {
    let n = 100_000;
    let mut prev: Option<f64> = None;
    for k in 0..=12 {
        let theta = PI * k as f64 / 12.0;
        let s = generate(&ground_state(), TranslationModel::ideal(theta), n, 100 + k).unwrap();
        let expected = (theta / 2.0).sin().powi(2);
        let dev = (s.frequency() - expected).abs();
        // Thirteen independent draws, so a 4 sigma band per angle.
        assert!(dev <= 4.0 / 3.0 * three_sigma(expected, n) + 1e-12, "theta {theta}: {} vs {expected}", s.frequency());
        if let Some(p) = prev {
            assert!(s.frequency() + three_sigma(0.5, n) >= p);
        }
        prev = Some(s.frequency());
    }
}

#[test]
fn noise_pulls_toward_half() {
    let n = 200_000;
    let eps = 0.2;
    let s = generate(&ground_state(), TranslationModel::noisy(0.0, eps).unwrap(), n, 3).unwrap();
    let expected = eps / 2.0;
    assert!((s.frequency() - expected).abs() <= three_sigma(expected, n));
}

#[test]
fn extractor_unbiases() {
    for p in [0.1, 0.25, 0.5] {
        let raw = biased_bits(400_000, p, 77, 0);
        let out = von_neumann_bits(&raw);
        let expected_len = 200_000.0 * 2.0 * p * (1.0 - p);
        assert!((out.len() as f64 - expected_len).abs() < 5.0 * expected_len.sqrt());
        assert!((freq(&out) - 0.5).abs() <= three_sigma(0.5, out.len()));
    }
}

#[test]
fn sixty_degree_stream_extracts_fair() {
    let s = generate(&ground_state(), TranslationModel::ideal(PI / 3.0), 1_000_000, 21).unwrap();
    assert!((s.frequency() - 0.25).abs() <= three_sigma(0.25, 1_000_000));
    let out = von_neumann_bits(&s.bits);
    assert!((freq(&out) - 0.5).abs() <= three_sigma(0.5, out.len()));
}

#[test]
fn battery_passes_on_fair_stream() {
    let s = generate(&ground_state(), TranslationModel::ideal(PI / 2.0), 1_000_000, 2718).unwrap();
    let report = test_battery(&s.bits, ALPHA);
    assert!(!report.partial);
    assert!(report.pass, "{report:?}");
}

#[test]
fn per_test_rejection_rates_calibrated() {
    let trials = 1000;
    let n = 20_000;
    let mut rejections = [0usize; 3];
    for lane in 0..trials {
        let bits = uniform_bits(n, 4242, lane as u64);
        for (k, t) in [monobit_test(&bits, ALPHA), runs_test(&bits, ALPHA), chi_square_block_test(&bits, ALPHA)]
            .iter()
            .enumerate()
        {
            rejections[k] += !t.pass as usize;
        }
    }
    for r in rejections {
        let rate = r as f64 / trials as f64;
        assert!((0.002..=0.03).contains(&rate), "rejection rate {rate}");
    }
}
