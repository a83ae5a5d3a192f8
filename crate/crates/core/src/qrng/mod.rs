//! Context-mismatch random bit simulator.
//!
//! A qubit is prepared in some state and measured along a rotated axis; the
//! Born rule gives the bit probabilities and a seeded ChaCha20 stream does
//! the sampling. Lane `k` of seed `s` is ChaCha20 seeded from `s` with
//! stream id `k`; `generate` always uses lane 0.

mod battery;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

pub use battery::{
    chi_square_block_test, monobit_test, runs_test, test_battery, BatteryReport, TestResult, ALPHA, BATTERY_MIN_BITS,
    BLOCK_BITS,
};

use crate::error::{Error, Result};
use crate::quantum::{CMatrix, DensityState, Observable};

/// Probabilities this close to 0 or 1 are treated as exact.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    /// With probability `epsilon` the outcome is replaced by a fair coin.
    Noisy {
        epsilon: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationModel {
    /// Measurement axis relative to the preparation axis, in radians.
    pub theta: f64,
    pub mode: Mode,
}

impl TranslationModel {
    pub fn ideal(theta: f64) -> Self {
        Self { theta, mode: Mode::Ideal }
    }

    pub fn noisy(theta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!("noise {epsilon} outside [0, 1]")));
        }
        Ok(Self { theta, mode: Mode::Noisy { epsilon } })
    }

    /// Born probability of outcome 1 for `rho`, before noise.
    pub fn p_one(&self, rho: &DensityState<f64>) -> Result<f64> {
        if rho.dimension() != 2 {
            return Err(Error::DimensionMismatch { left: 2, right: rho.dimension() });
        }
        // Outcome 1 is the -1 eigenspace of the rotated spin.
        let minus = CMatrix::identity(2).add(&Observable::spin(self.theta).matrix().scale(-1.0)).scale(0.5);
        let p = crate::quantum::expectation(rho, &Observable::new(minus)?)?;
        Ok(if p < SNAP {
            0.0
        } else if p > 1.0 - SNAP {
            1.0
        } else {
            p
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Preparation density matrix, row-major `(re, im)` pairs.
    pub preparation: Vec<(f64, f64)>,
    pub measurement: String,
    pub model: TranslationModel,
    /// Length of the generated stream before any extraction.
    pub raw_bits: usize,
    pub extracted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitStream {
    pub bits: Vec<bool>,
    pub seed: u64,
    pub provenance: Provenance,
}

impl BitStream {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn frequency(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            self.ones() as f64 / self.bits.len() as f64
        }
    }

    /// Shannon entropy per bit of the empirical frequency.
    pub fn entropy(&self) -> f64 {
        binary_entropy(self.frequency())
    }

    pub fn battery(&self, alpha: f64) -> BatteryReport {
        test_battery(&self.bits, alpha)
    }

    pub fn to_ascii(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Packed most significant bit first; the last byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        pack_bits(&self.bits)
    }

    pub fn preparation_state(&self) -> Result<DensityState<f64>> {
        let entries: Vec<Complex<f64>> =
            self.provenance.preparation.iter().map(|&(re, im)| Complex::new(re, im)).collect();
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n * n != entries.len() {
            return Err(Error::InvalidState("preparation is not a square matrix".into()));
        }
        let rows = entries.chunks(n).map(|r| r.to_vec()).collect();
        DensityState::new(CMatrix::from_rows(rows)?)
    }

    /// Replays the generation recorded in the provenance.
    pub fn regenerate(&self) -> Result<Self> {
        let rho = self.preparation_state()?;
        let fresh = generate(&rho, self.provenance.model, self.provenance.raw_bits, self.seed)?;
        Ok(if self.provenance.extracted { von_neumann_extract(&fresh) } else { fresh })
    }
}

pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |byte, (i, &b)| byte | ((b as u8) << (7 - i))))
        .collect()
}

pub fn unpack_bytes(bytes: &[u8]) -> Vec<bool> {
    bytes.iter().flat_map(|&byte| (0..8).map(move |i| byte & (1 << (7 - i)) != 0)).collect()
}

/// Parses ASCII `0`/`1`, ignoring whitespace.
pub fn parse_ascii_bits(text: &str) -> Result<Vec<bool>> {
    let mut bits = Vec::with_capacity(text.len());
    for (line_no, line) in text.lines().enumerate() {
        for ch in line.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line: line_no + 1,
                        message: format!("unexpected character `{c}` in bit stream"),
                    })
                }
            }
        }
    }
    Ok(bits)
}

pub fn lane_rng(seed: u64, lane: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(lane);
    rng
}

fn measurement_label(theta: f64) -> String {
    format!("spin(theta = {theta})")
}

/// Simulates `n` measurements of `prep` along the model's rotated axis.
pub fn generate(prep: &DensityState<f64>, model: TranslationModel, n: usize, seed: u64) -> Result<BitStream> {
    if n == 0 {
        return Err(Error::InvalidArgument("stream length must be at least 1".into()));
    }
    let p = model.p_one(prep)?;
    let mut rng = lane_rng(seed, 0);
    let bits = (0..n)
        .map(|_| match model.mode {
            Mode::Noisy { epsilon } if rng.gen::<f64>() < epsilon => rng.gen::<bool>(),
            _ => rng.gen::<f64>() < p,
        })
        .collect();
    let m = prep.matrix();
    let preparation = (0..m.dim())
        .flat_map(|i| (0..m.dim()).map(move |j| (i, j)))
        .map(|(i, j)| (m.get(i, j).re, m.get(i, j).im))
        .collect();
    Ok(BitStream {
        bits,
        seed,
        provenance: Provenance {
            preparation,
            measurement: measurement_label(model.theta),
            model,
            raw_bits: n,
            extracted: false,
        },
    })
}

/// `|0⟩`, the +1 eigenstate of the unrotated spin.
pub fn ground_state() -> DensityState<f64> {
    DensityState::pure_real(&[1.0, 0.0]).expect("valid state")
}

/// Fair bits straight from the driving generator, lane `lane`.
pub fn uniform_bits(n: usize, seed: u64, lane: u64) -> Vec<bool> {
    let mut rng = lane_rng(seed, lane);
    (0..n).map(|_| rng.gen::<bool>()).collect()
}

/// i.i.d. bits with `P(1) = p` from lane `lane`.
pub fn biased_bits(n: usize, p: f64, seed: u64, lane: u64) -> Vec<bool> {
    let mut rng = lane_rng(seed, lane);
    (0..n).map(|_| rng.gen::<f64>() < p).collect()
}

pub fn von_neumann_bits(bits: &[bool]) -> Vec<bool> {
    bits.chunks_exact(2)
        .filter_map(|pair| match (pair[0], pair[1]) {
            (false, true) => Some(false),
            (true, false) => Some(true),
            _ => None,
        })
        .collect()
}

/// `01 -> 0`, `10 -> 1`, equal pairs dropped.
pub fn von_neumann_extract(s: &BitStream) -> BitStream {
    let mut provenance = s.provenance.clone();
    provenance.extracted = true;
    BitStream { bits: von_neumann_bits(&s.bits), seed: s.seed, provenance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matching_context_is_deterministic() {
        let s = generate(&ground_state(), TranslationModel::ideal(0.0), 1000, 7).unwrap();
        assert_eq!(s.ones(), 0);
        assert_eq!(s.entropy(), 0.0);
        let flipped = generate(&ground_state(), TranslationModel::ideal(PI), 1000, 7).unwrap();
        assert_eq!(flipped.ones(), 1000);
    }

    #[test]
    fn malus_profile() {
        for theta in [0.3, 1.0, 2.0] {
            let p = TranslationModel::ideal(theta).p_one(&ground_state()).unwrap();
            assert!((p - (theta / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn extractor_pairs() {
        assert_eq!(von_neumann_bits(&[false, true, true, false, true, true, false, false]), vec![false, true]);
        assert!(von_neumann_bits(&[false; 10]).is_empty());
    }

    #[test]
    fn regenerate_is_bit_exact() {
        let model = TranslationModel::noisy(1.2, 0.1).unwrap();
        let s = generate(&ground_state(), model, 500, 99).unwrap();
        assert_eq!(s.regenerate().unwrap(), s);
        let e = von_neumann_extract(&s);
        assert_eq!(e.regenerate().unwrap(), e);
    }

    #[test]
    fn packing_roundtrip() {
        let bits = vec![true, false, true, true, false, false, false, true, true];
        let bytes = pack_bits(&bits);
        assert_eq!(bytes, vec![0b1011_0001, 0b1000_0000]);
        assert_eq!(&unpack_bytes(&bytes)[..9], &bits[..]);
        assert_eq!(parse_ascii_bits("10 1\n1").unwrap(), vec![true, false, true, true]);
        assert!(parse_ascii_bits("102").is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(TranslationModel::noisy(0.0, 1.5).is_err());
        assert!(generate(&ground_state(), TranslationModel::ideal(0.0), 0, 1).is_err());
        let qutrit = DensityState::maximally_mixed(3).unwrap();
        assert!(generate(&qutrit, TranslationModel::ideal(0.0), 10, 1).is_err());
    }

    #[test]
    fn lanes_differ() {
        assert_ne!(uniform_bits(64, 1, 0), uniform_bits(64, 1, 1));
        assert_eq!(uniform_bits(64, 1, 3), uniform_bits(64, 1, 3));
    }
}
