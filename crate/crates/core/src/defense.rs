//! Countermeasure encodings and leakage-state analysis.
//!
//! The observable "state" of a write is the Hamming weight of the encoded
//! word (equivalently its final supply-current level). Parity merges
//! adjacent weight classes; random appended bits smear each data weight
//! over a range of levels. For the random scheme, where a simple state
//! count is not meaningful, the report carries the fraction of uniquely
//! decodable data weights and the mean posterior entropy of the data
//! weight given the observed level.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comb::{binomial, weight_probs};
use crate::device::{
    AccessMode, BitState, DeviceParams, RetentionFit, RetentionTime, SwitchDirection,
};
use crate::error::{Error, Result};
use crate::math;
use crate::trace::DriverMode;
use crate::word::{Word, MAX_WIDTH};

/// Write-side word encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingScheme {
    /// Identity: the data word is written as-is.
    None,
    /// One appended bit making the total Hamming weight even.
    Parity1,
    /// `bits` appended uniform random bits, 1 to 8.
    Random { bits: u8 },
}

/// Largest number of appended random bits.
pub const MAX_RANDOM_BITS: u8 = 8;

impl EncodingScheme {
    pub fn overhead_bits(&self) -> usize {
        match self {
            EncodingScheme::None => 0,
            EncodingScheme::Parity1 => 1,
            EncodingScheme::Random { bits } => *bits as usize,
        }
    }

    pub fn validate(&self, data_width: usize) -> Result<()> {
        if data_width == 0 {
            return Err(Error::Domain("data width must be at least 1".into()));
        }
        if let EncodingScheme::Random { bits } = self {
            if *bits == 0 || *bits > MAX_RANDOM_BITS {
                return Err(Error::Config(alloc::format!(
                    "random scheme bits must be in [1, {MAX_RANDOM_BITS}], got {bits}"
                )));
            }
        }
        if data_width + self.overhead_bits() > MAX_WIDTH {
            return Err(Error::Domain(alloc::format!(
                "encoded width {} exceeds the maximum {MAX_WIDTH}",
                data_width + self.overhead_bits()
            )));
        }
        Ok(())
    }

    /// Encode a data word. The seed only matters for the random scheme.
    pub fn encode(&self, word: &Word, seed: u64) -> Result<Word> {
        self.validate(word.width())?;
        match self {
            EncodingScheme::None => Ok(word.clone()),
            EncodingScheme::Parity1 => {
                let parity = word.hamming_weight() % 2 == 1;
                word.append(&[parity])
            }
            EncodingScheme::Random { bits } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let extra: Vec<bool> = (0..*bits).map(|_| rng.gen::<bool>()).collect();
                word.append(&extra)
            }
        }
    }

    /// Strip the scheme's appended bits, recovering the data word.
    pub fn decode(&self, encoded: &Word) -> Result<Word> {
        match self.overhead_bits() {
            0 => Ok(encoded.clone()),
            n => encoded.truncate(n),
        }
    }

    /// `cond[w][h]`: probability that data weight `w` encodes to observed
    /// weight `h`, for `h` in `0..=data_width + overhead`.
    fn conditional_levels(&self, data_width: usize) -> Vec<Vec<f64>> {
        let n_levels = data_width + self.overhead_bits() + 1;
        let mut cond = alloc::vec![alloc::vec![0.0; n_levels]; data_width + 1];
        match self {
            EncodingScheme::None => {
                for (w, row) in cond.iter_mut().enumerate() {
                    row[w] = 1.0;
                }
            }
            EncodingScheme::Parity1 => {
                for (w, row) in cond.iter_mut().enumerate() {
                    row[w + (w % 2)] = 1.0;
                }
            }
            EncodingScheme::Random { bits } => {
                let r = *bits as usize;
                let scale = math::exp2(-(r as f64));
                for (w, row) in cond.iter_mut().enumerate() {
                    for j in 0..=r {
                        row[w + j] = binomial(r, j) * scale;
                    }
                }
            }
        }
        cond
    }
}

/// Leakage-state report for one (width, scheme) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    pub data_width: usize,
    pub scheme: EncodingScheme,
    /// Distinct levels without any encoding: width + 1.
    pub states_uncoded: usize,
    /// Distinct reachable encoded levels.
    pub states_encoded: usize,
    /// 100 * (uncoded - encoded) / uncoded. Negative for the random
    /// scheme, which adds levels rather than merging them.
    pub reduction_pct: f64,
    /// Fraction of data weights for which some observable level
    /// identifies them with certainty.
    pub unique_decodable_fraction: f64,
    /// Mean over observed levels of the posterior entropy of the data
    /// weight, uniform data words and uniform random bits.
    pub mean_posterior_entropy_bits: f64,
}

fn entropy_bits(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * math::log2(p))
        .sum::<f64>()
}

fn report_from_conditionals(
    data_width: usize,
    scheme: EncodingScheme,
    cond: &[Vec<f64>],
    p_w: &[f64],
) -> StateReport {
    let n_levels = cond[0].len();
    let n_weights = cond.len();

    let mut p_h = alloc::vec![0.0f64; n_levels];
    for (w, row) in cond.iter().enumerate() {
        for (h, &c) in row.iter().enumerate() {
            p_h[h] += p_w[w] * c;
        }
    }

    let mut states_encoded = 0usize;
    let mut mean_entropy = 0.0f64;
    let mut uniquely_decodable = alloc::vec![false; n_weights];
    for h in 0..n_levels {
        let support: Vec<usize> = (0..n_weights).filter(|&w| cond[w][h] > 0.0).collect();
        if support.is_empty() {
            continue;
        }
        states_encoded += 1;
        if support.len() == 1 {
            uniquely_decodable[support[0]] = true;
        }
        if p_h[h] > 0.0 {
            let posterior: Vec<f64> = support
                .iter()
                .map(|&w| p_w[w] * cond[w][h] / p_h[h])
                .collect();
            mean_entropy += p_h[h] * entropy_bits(&posterior);
        }
    }

    let states_uncoded = data_width + 1;
    StateReport {
        data_width,
        scheme,
        states_uncoded,
        states_encoded,
        reduction_pct: 100.0 * (states_uncoded as f64 - states_encoded as f64)
            / states_uncoded as f64,
        unique_decodable_fraction: uniquely_decodable.iter().filter(|&&u| u).count() as f64
            / n_weights as f64,
        mean_posterior_entropy_bits: mean_entropy,
    }
}

/// Count reachable encoded levels and the decodability metrics for a
/// (width, scheme) pair. Uses the closed-form binomial weight model; see
/// [`enumerate_states_exhaustive`] for the word-level enumeration path.
pub fn enumerate_states(data_width: usize, scheme: EncodingScheme) -> Result<StateReport> {
    scheme.validate(data_width)?;
    let cond = scheme.conditional_levels(data_width);
    let p_w = weight_probs(data_width);
    Ok(report_from_conditionals(data_width, scheme, &cond, &p_w))
}

/// Word-level enumeration over all `2^width` data words (and all random
/// bit values). Practical for widths up to about 20; must agree exactly
/// with [`enumerate_states`].
pub fn enumerate_states_exhaustive(
    data_width: usize,
    scheme: EncodingScheme,
) -> Result<StateReport> {
    scheme.validate(data_width)?;
    if data_width > 20 {
        return Err(Error::Domain(alloc::format!(
            "exhaustive enumeration is limited to width 20, got {data_width}"
        )));
    }
    let n_levels = data_width + scheme.overhead_bits() + 1;
    // counts[w][h]: number of (data word, randomness) combinations with
    // data weight w encoding to weight h.
    let mut counts = alloc::vec![alloc::vec![0u64; n_levels]; data_width + 1];
    let r_values: u64 = match scheme {
        EncodingScheme::Random { bits } => 1 << bits,
        _ => 1,
    };
    for word in 0u64..1 << data_width {
        let w = word.count_ones() as usize;
        for rv in 0..r_values {
            let h = match scheme {
                EncodingScheme::None => w,
                EncodingScheme::Parity1 => w + w % 2,
                EncodingScheme::Random { .. } => w + rv.count_ones() as usize,
            };
            counts[w][h] += 1;
        }
    }
    let total = ((1u64 << data_width) * r_values) as f64;
    let p_w: Vec<f64> = counts
        .iter()
        .map(|row| row.iter().sum::<u64>() as f64 / total)
        .collect();
    let cond: Vec<Vec<f64>> = counts
        .iter()
        .zip(&p_w)
        .map(|(row, &pw)| {
            row.iter()
                .map(|&c| if pw > 0.0 { c as f64 / total / pw } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(report_from_conditionals(data_width, scheme, &cond, &p_w))
}

/// Number of data words consistent with an observed encoded weight.
pub(crate) fn words_for_level(data_width: usize, scheme: EncodingScheme, level: usize) -> f64 {
    let max_level = data_width + scheme.overhead_bits();
    if level > max_level {
        return 0.0;
    }
    match scheme {
        EncodingScheme::None => binomial(data_width, level),
        EncodingScheme::Parity1 => {
            let mut count = 0.0;
            for w in level.saturating_sub(1)..=level.min(data_width) {
                if w + w % 2 == level {
                    count += binomial(data_width, w);
                }
            }
            count
        }
        EncodingScheme::Random { bits } => {
            let r = bits as usize;
            (level.saturating_sub(r)..=level.min(data_width))
                .map(|w| binomial(data_width, w))
                .sum()
        }
    }
}

/// One row of the retention-scaling (SNVM) profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SnvmRow {
    pub volume_factor: f64,
    pub delta: f64,
    pub retention: RetentionTime,
    pub write_latency_s: f64,
    /// Parallel-state constant-voltage write current, A.
    pub write_current_a: f64,
    /// Supply-current gap between adjacent Hamming-weight levels, A.
    pub level_gap_a: f64,
}

/// Retention, latency and current levels across free-layer volume
/// scalings at a fixed temperature.
pub fn snvm_profile(
    params: &DeviceParams,
    fit: &RetentionFit,
    temperature_k: f64,
    volume_factors: &[f64],
) -> Result<Vec<SnvmRow>> {
    volume_factors
        .iter()
        .map(|&factor| {
            let scaled = params.scale_volume(factor)?;
            let delta = scaled.thermal_stability(temperature_k)?;
            Ok(SnvmRow {
                volume_factor: factor,
                delta,
                retention: fit.retention_time(delta)?,
                write_latency_s: scaled.write_latency(
                    delta,
                    scaled.v_supply,
                    SwitchDirection::PToAp,
                )?,
                write_current_a: scaled.cell_current(BitState::Parallel, AccessMode::Write),
                level_gap_a: scaled.v_write_eff * (1.0 / scaled.r_low - 1.0 / scaled.r_high()),
            })
        })
        .collect()
}

/// One cell of the scheme-by-width-by-driver comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct DefenseCell {
    pub width: usize,
    pub scheme: EncodingScheme,
    pub driver_constant_current: bool,
    pub states: usize,
    pub reduction_pct: f64,
    pub unique_decodable_fraction: f64,
    pub mean_posterior_entropy_bits: f64,
    /// Expected log2 candidate-pair count for a uniform random write.
    pub mean_effort_bits: f64,
}

/// Expected per-direction effort in bits under constant voltage: the mean
/// over observed levels of log2 of the consistent data-word count.
fn mean_direction_effort(data_width: usize, scheme: EncodingScheme) -> f64 {
    let cond = scheme.conditional_levels(data_width);
    let p_w = weight_probs(data_width);
    let n_levels = data_width + scheme.overhead_bits() + 1;
    let mut effort = 0.0;
    #[allow(clippy::needless_range_loop)]
    for h in 0..n_levels {
        let p_h: f64 = (0..=data_width).map(|w| p_w[w] * cond[w][h]).sum();
        if p_h > 0.0 {
            effort += p_h * math::log2(words_for_level(data_width, scheme, h).max(1.0));
        }
    }
    effort
}

/// Cross-tabulate state counts and attack effort for every combination of
/// width, scheme and driver.
pub fn defense_matrix(
    widths: &[usize],
    schemes: &[EncodingScheme],
    drivers: &[DriverMode],
) -> Result<Vec<DefenseCell>> {
    if widths.is_empty() || schemes.is_empty() || drivers.is_empty() {
        return Err(Error::Domain(
            "defense matrix needs at least one width, scheme and driver".into(),
        ));
    }
    let mut cells = Vec::new();
    for &width in widths {
        for &scheme in schemes {
            let report = enumerate_states(width, scheme)?;
            for driver in drivers {
                driver.validate()?;
                let cell = match driver {
                    DriverMode::ConstantVoltage => DefenseCell {
                        width,
                        scheme,
                        driver_constant_current: false,
                        states: report.states_encoded,
                        reduction_pct: report.reduction_pct,
                        unique_decodable_fraction: report.unique_decodable_fraction,
                        mean_posterior_entropy_bits: report.mean_posterior_entropy_bits,
                        mean_effort_bits: 2.0 * mean_direction_effort(width, scheme),
                    },
                    DriverMode::ConstantCurrent { .. } => DefenseCell {
                        width,
                        scheme,
                        driver_constant_current: true,
                        // Flat signature: one level, nothing decodable,
                        // full weight entropy, full search space.
                        states: 1,
                        reduction_pct: 100.0 * width as f64 / (width as f64 + 1.0),
                        unique_decodable_fraction: 0.0,
                        mean_posterior_entropy_bits: entropy_bits(&weight_probs(width)),
                        mean_effort_bits: 2.0 * width as f64,
                    },
                };
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}
