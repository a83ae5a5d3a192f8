//! Frequency, runs and block chi-square tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

pub const ALPHA: f64 = 0.01;
/// Below this length only the frequency test is run.
pub const BATTERY_MIN_BITS: usize = 10_000;
pub const BLOCK_BITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

impl TestResult {
    fn new(name: &str, statistic: f64, p_value: f64, alpha: f64) -> Self {
        Self { name: name.to_string(), statistic, p_value, pass: p_value >= alpha }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub bits: usize,
    pub alpha: f64,
    pub partial: bool,
    pub tests: Vec<TestResult>,
    pub pass: bool,
}

/// Statistic is `|S_n| / √n` with `S_n` the ±1 sum.
pub fn monobit_test(bits: &[bool], alpha: f64) -> TestResult {
    let n = bits.len().max(1) as f64;
    let sum: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s_obs = (sum as f64).abs() / n.sqrt();
    TestResult::new("monobit", s_obs, erfc(s_obs / 2f64.sqrt()), alpha)
}

/// Statistic is the number of runs. Fails outright (p = 0) when the
/// frequency prerequisite `|π - 1/2| < 2/√n` does not hold.
pub fn runs_test(bits: &[bool], alpha: f64) -> TestResult {
    let n = bits.len();
    if n < 2 {
        return TestResult::new("runs", n as f64, 0.0, alpha);
    }
    let nf = n as f64;
    let pi = bits.iter().filter(|&&b| b).count() as f64 / nf;
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let v = runs as f64;
    if (pi - 0.5).abs() >= 2.0 / nf.sqrt() {
        return TestResult::new("runs", v, 0.0, alpha);
    }
    let spread = 2.0 * pi * (1.0 - pi);
    let p = erfc((v - nf * spread).abs() / (2.0 * (2.0 * nf).sqrt() * pi * (1.0 - pi)));
    TestResult::new("runs", v, p, alpha)
}

/// Pearson chi-square of non-overlapping 8-bit block values against the
/// uniform distribution, 255 degrees of freedom, upper tail.
pub fn chi_square_block_test(bits: &[bool], alpha: f64) -> TestResult {
    let categories = 1usize << BLOCK_BITS;
    let mut counts = vec![0u64; categories];
    let blocks = bits.len() / BLOCK_BITS;
    for chunk in bits.chunks_exact(BLOCK_BITS) {
        let value = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        counts[value] += 1;
    }
    if blocks == 0 {
        return TestResult::new("chi_square_block8", 0.0, 0.0, alpha);
    }
    let expected = blocks as f64 / categories as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((categories - 1) as f64).expect("positive degrees of freedom");
    TestResult::new("chi_square_block8", stat, dist.sf(stat), alpha)
}

pub fn test_battery(bits: &[bool], alpha: f64) -> BatteryReport {
    let partial = bits.len() < BATTERY_MIN_BITS;
    let mut tests = vec![monobit_test(bits, alpha)];
    if !partial {
        tests.push(runs_test(bits, alpha));
        tests.push(chi_square_block_test(bits, alpha));
    }
    let pass = tests.iter().all(|t| t.pass);
    BatteryReport { bits: bits.len(), alpha, partial, tests, pass }
}
