//! Statistical audit battery: monobit frequency, runs, chi-square
//! equidistribution, and the MT19937 first-output bias scanner.
//!
//! Only a small battery is implemented here; the raw little-endian word dump
//! the CLI produces can be piped into the big external suites when deeper
//! vetting is wanted. All tests are pure functions of their input bits and
//! report a [`TestReport`] with the statistic, p-value and verdict at the
//! requested significance level.

pub mod special;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitgen::mt19937_first_output;
use crate::error::{Error, Result};
use special::{erfc, igamc};

/// Minimum input length accepted by the bit-level tests. A hundred bits or
/// more is recommended for meaningful p-values.
pub const MIN_BITS: usize = 10;

const MIN_EXPECTED_PER_BIN: f64 = 5.0;

/// A packed bit string. Bit `i` is bit `i % 8` (least significant first) of
/// byte `i / 8`, which makes a little-endian word dump read back in stream
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    bytes: Vec<u8>,
    len: usize,
}

impl Bits {
    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        let bytes = bytes.into();
        let len = bytes.len() * 8;
        Bits { bytes, len }
    }

    pub fn from_words_u64(words: &[u64]) -> Self {
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for word in words {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        Self::from_bytes(bytes)
    }

    pub fn from_words_u32(words: &[u32]) -> Self {
        let mut bytes = Vec::with_capacity(words.len() * 4);
        for word in words {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        Self::from_bytes(bytes)
    }

    /// Parse a literal like `"1011010101"`, first character first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut bits = Bits {
            bytes: Vec::with_capacity(s.len() / 8 + 1),
            len: 0,
        };
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(Error::InvalidBitChar(other)),
            }
        }
        Ok(bits)
    }

    fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.bytes[i / 8] >> (i % 8)) & 1 == 1)
    }

    pub fn count_ones(&self) -> u64 {
        let full = self.len / 8;
        let mut ones: u64 = self.bytes[..full]
            .iter()
            .map(|b| u64::from(b.count_ones()))
            .sum();
        let tail = self.len % 8;
        if tail > 0 {
            let mask = (1u16 << tail) as u8 - 1;
            ones += u64::from((self.bytes[full] & mask).count_ones());
        }
        ones
    }
}

/// Test outcome at the chosen significance level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The test's precondition failed, so no p-value is meaningful (the runs
    /// test requires the ones proportion to be near one half first).
    NotApplicable,
}

/// Result of one statistical test.
#[derive(Clone, Debug, Serialize)]
pub struct TestReport {
    pub test: String,
    pub sample_size: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub verdict: Verdict,
}

impl TestReport {
    fn from_p(test: &str, sample_size: usize, statistic: f64, p_value: f64, alpha: f64) -> Self {
        let verdict = if p_value >= alpha {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        TestReport {
            test: test.to_string(),
            sample_size,
            statistic,
            p_value,
            alpha,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Frequency (monobit) test: p = erfc(|#ones - #zeros| / sqrt(2n)).
pub fn monobit(bits: &Bits, alpha: f64) -> Result<TestReport> {
    let n = bits.len();
    if n < MIN_BITS {
        return Err(Error::BitsTooShort {
            required: MIN_BITS,
            actual: n,
        });
    }
    let ones = bits.count_ones() as f64;
    let s_n = 2.0 * ones - n as f64;
    let s_obs = s_n.abs() / (n as f64).sqrt();
    let p = erfc(s_obs / std::f64::consts::SQRT_2);
    Ok(TestReport::from_p("monobit", n, s_obs, p, alpha))
}

/// Runs test. Applicable only when the ones proportion is within 2/sqrt(n)
/// of one half; otherwise the report carries [`Verdict::NotApplicable`] with
/// the offending proportion deviation as its statistic.
pub fn runs_test(bits: &Bits, alpha: f64) -> Result<TestReport> {
    let n = bits.len();
    if n < MIN_BITS {
        return Err(Error::BitsTooShort {
            required: MIN_BITS,
            actual: n,
        });
    }
    let n_f = n as f64;
    let pi = bits.count_ones() as f64 / n_f;
    let tau = 2.0 / n_f.sqrt();
    if (pi - 0.5).abs() >= tau {
        return Ok(TestReport {
            test: "runs".to_string(),
            sample_size: n,
            statistic: (pi - 0.5).abs(),
            p_value: 0.0,
            alpha,
            verdict: Verdict::NotApplicable,
        });
    }

    let mut runs = 1u64;
    let mut iter = bits.iter();
    let mut prev = iter.next().expect("length checked above");
    for bit in iter {
        if bit != prev {
            runs += 1;
            prev = bit;
        }
    }
    let v_obs = runs as f64;
    let expected = 2.0 * n_f * pi * (1.0 - pi);
    let p = erfc((v_obs - expected).abs() / (2.0 * (2.0 * n_f).sqrt() * pi * (1.0 - pi)));
    Ok(TestReport::from_p("runs", n, v_obs, p, alpha))
}

/// Chi-square equidistribution test over `bins` equiprobable cells.
pub fn chi_square_uniform(samples: &[u64], bins: u64, alpha: f64) -> Result<TestReport> {
    if bins < 2 {
        return Err(Error::InvalidBinCount);
    }
    let expected = samples.len() as f64 / bins as f64;
    if expected < MIN_EXPECTED_PER_BIN {
        return Err(Error::UndersampledBins {
            expected,
            minimum: MIN_EXPECTED_PER_BIN,
        });
    }
    let mut counts = vec![0u64; usize::try_from(bins).expect("bin count fits in memory")];
    for &sample in samples {
        if sample >= bins {
            return Err(Error::SampleOutOfRange {
                value: sample,
                bins,
            });
        }
        counts[sample as usize] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .map(|&count| {
            let diff = count as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let p = igamc((bins - 1) as f64 / 2.0, chi2 / 2.0);
    Ok(TestReport::from_p(
        "chi_square_uniform",
        samples.len(),
        chi2,
        p,
        alpha,
    ))
}

/// Hit counts for one scanned target value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetHits {
    pub target: u32,
    pub hits: u64,
}

/// Outcome of a first-output bias scan.
#[derive(Clone, Debug, Serialize)]
pub struct BiasScanReport {
    pub seeds_scanned: u64,
    pub target_hits: Vec<TargetHits>,
    /// Targets never observed as a first output over the scanned seeds.
    pub unreachable_targets: Vec<u32>,
}

impl BiasScanReport {
    pub fn hits_for(&self, target: u32) -> Option<u64> {
        self.target_hits
            .iter()
            .find(|entry| entry.target == target)
            .map(|entry| entry.hits)
    }
}

/// For every seed, initialize MT19937 with the classic single-word routine,
/// record its first 32-bit output, and count how often each target value
/// appears. Small-seed initialization leaves holes in the first-output space;
/// this scan measures them directly.
pub fn first_output_bias_scan(
    seeds: impl IntoIterator<Item = u32>,
    targets: &[u32],
) -> BiasScanReport {
    scan_range_merge(vec![scan_seeds(seeds, targets)], targets)
}

/// Scan all 2^32 single-word seeds, partitioned across threads. Hours of CPU
/// in total; intended for the CLI's exhaustive mode.
pub fn exhaustive_first_output_scan(targets: &[u32]) -> BiasScanReport {
    const CHUNKS: u64 = 1 << 12;
    let span = (1u64 << 32) / CHUNKS;
    let partials: Vec<ScanPartial> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * span;
            scan_seeds((start..start + span).map(|seed| seed as u32), targets)
        })
        .collect();
    scan_range_merge(partials, targets)
}

struct ScanPartial {
    seeds_scanned: u64,
    hits: Vec<u64>,
}

fn scan_seeds(seeds: impl IntoIterator<Item = u32>, targets: &[u32]) -> ScanPartial {
    let index: std::collections::HashMap<u32, usize> = targets
        .iter()
        .enumerate()
        .map(|(slot, &target)| (target, slot))
        .collect();
    let mut hits = vec![0u64; targets.len()];
    let mut seeds_scanned = 0u64;
    for seed in seeds {
        seeds_scanned += 1;
        if let Some(&slot) = index.get(&mt19937_first_output(seed)) {
            hits[slot] += 1;
        }
    }
    ScanPartial {
        seeds_scanned,
        hits,
    }
}

fn scan_range_merge(partials: Vec<ScanPartial>, targets: &[u32]) -> BiasScanReport {
    let mut seeds_scanned = 0u64;
    let mut hits = vec![0u64; targets.len()];
    for partial in partials {
        seeds_scanned += partial.seeds_scanned;
        for (total, part) in hits.iter_mut().zip(partial.hits) {
            *total += part;
        }
    }
    let target_hits: Vec<TargetHits> = targets
        .iter()
        .zip(&hits)
        .map(|(&target, &hits)| TargetHits { target, hits })
        .collect();
    let unreachable_targets = target_hits
        .iter()
        .filter(|entry| entry.hits == 0)
        .map(|entry| entry.target)
        .collect();
    BiasScanReport {
        seeds_scanned,
        target_hits,
        unreachable_targets,
    }
}
