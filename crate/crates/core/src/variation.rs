//! Process-variation sampling, Monte Carlo latency distributions and
//! extreme-value extrapolation of worst-case latency to array-scale
//! populations.
//!
//! Per-bit RNG streams are derived from `(seed, bit index)` so results
//! never depend on sampling order or thread count.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::device::{DeviceParams, SwitchDirection};
use crate::error::{Error, Result};
use crate::math;
use crate::randn::standard_normal;

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Distribution family for per-bit parameter multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvDistribution {
    Normal,
    Lognormal,
}

/// Relative spreads of the varied device parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PvModel {
    /// Relative sigma of the per-bit thermal stability factor.
    pub sigma_delta_rel: f64,
    /// Relative sigma of the per-bit parallel resistance.
    pub sigma_r_rel: f64,
    /// Relative sigma of the per-bit TMR.
    pub sigma_tmr_rel: f64,
    pub distribution: PvDistribution,
}

impl Default for PvModel {
    fn default() -> Self {
        PvModel {
            sigma_delta_rel: 0.05,
            sigma_r_rel: 0.05,
            sigma_tmr_rel: 0.05,
            distribution: PvDistribution::Normal,
        }
    }
}

impl PvModel {
    /// A model with zero spread: every bit is the nominal device.
    pub fn zero() -> Self {
        PvModel {
            sigma_delta_rel: 0.0,
            sigma_r_rel: 0.0,
            sigma_tmr_rel: 0.0,
            distribution: PvDistribution::Normal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, s) in [
            ("sigma_delta_rel", self.sigma_delta_rel),
            ("sigma_r_rel", self.sigma_r_rel),
            ("sigma_tmr_rel", self.sigma_tmr_rel),
        ] {
            if !(0.0..0.5).contains(&s) {
                return Err(Error::Config(alloc::format!(
                    "{name} must be in [0, 0.5), got {s}"
                )));
            }
        }
        Ok(())
    }
}

/// Realized per-bit parameter multipliers and values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitVariation {
    /// Multiplier applied to the nominal thermal stability.
    pub delta_mult: f64,
    /// Realized parallel resistance, ohms.
    pub r_low: f64,
    /// Realized TMR.
    pub tmr: f64,
}

/// A reproducible draw of per-bit device parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PvSample {
    nominal: DeviceParams,
    model: PvModel,
    seed: u64,
    bits: Vec<BitVariation>,
}

impl PvSample {
    /// `count` copies of the nominal device (zero variance).
    pub fn nominal(params: &DeviceParams, count: usize) -> Result<Self> {
        sample_devices(params, &PvModel::zero(), count, 0)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn nominal_params(&self) -> &DeviceParams {
        &self.nominal
    }

    pub fn model(&self) -> &PvModel {
        &self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bit(&self, i: usize) -> &BitVariation {
        &self.bits[i]
    }

    pub fn bits(&self) -> &[BitVariation] {
        &self.bits
    }

    /// Nominal parameters with this bit's realized resistance and TMR.
    pub fn device_for_bit(&self, i: usize) -> DeviceParams {
        let v = &self.bits[i];
        DeviceParams {
            r_low: v.r_low,
            tmr: v.tmr,
            ..self.nominal.clone()
        }
    }
}

fn multiplier<R: Rng>(rng: &mut R, sigma: f64, dist: PvDistribution) -> f64 {
    let z = standard_normal(rng);
    match dist {
        PvDistribution::Normal => {
            let mut m = 1.0 + sigma * z;
            // Truncate the unphysical lower tail by redrawing.
            while m <= 0.01 {
                m = 1.0 + sigma * standard_normal(rng);
            }
            m
        }
        // Mean-one lognormal.
        PvDistribution::Lognormal => math::exp(sigma * z - 0.5 * sigma * sigma),
    }
}

/// Draw `count` per-bit devices around `nominal`. Deterministic in
/// `(nominal, model, count, seed)`.
pub fn sample_devices(
    nominal: &DeviceParams,
    model: &PvModel,
    count: usize,
    seed: u64,
) -> Result<PvSample> {
    if count == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    nominal.validate()?;
    model.validate()?;
    let mut bits = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let delta_mult = multiplier(&mut rng, model.sigma_delta_rel, model.distribution);
        let r_mult = multiplier(&mut rng, model.sigma_r_rel, model.distribution);
        let tmr_mult = multiplier(&mut rng, model.sigma_tmr_rel, model.distribution);
        bits.push(BitVariation {
            delta_mult,
            r_low: nominal.r_low * r_mult,
            tmr: nominal.tmr * tmr_mult,
        });
    }
    Ok(PvSample {
        nominal: nominal.clone(),
        model: model.clone(),
        seed,
        bits,
    })
}

/// Sense-margin-sensitivity model for read latency: bits with degraded TMR
/// take longer to sense, as `tau0 * (tmr_nominal / tmr_bit)^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadLatencyModel {
    /// Read latency of the nominal bit, seconds.
    pub tau0: f64,
    /// Sensitivity exponent.
    pub exponent: f64,
}

impl Default for ReadLatencyModel {
    fn default() -> Self {
        ReadLatencyModel {
            tau0: 1.0e-9,
            exponent: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatencyKind {
    Write,
    Read,
}

/// Per-bit write latencies (slow direction, nominal supply voltage) at the
/// given ambient temperature.
pub fn write_latencies(sample: &PvSample, temperature_k: f64) -> Result<Vec<f64>> {
    let nominal = sample.nominal_params();
    let delta_nom = nominal.thermal_stability(temperature_k)?;
    sample
        .bits()
        .iter()
        .map(|v| {
            nominal.write_latency(
                v.delta_mult * delta_nom,
                nominal.v_supply,
                SwitchDirection::PToAp,
            )
        })
        .collect()
}

/// Per-bit read latencies under the sense-margin model.
pub fn read_latencies(sample: &PvSample, model: &ReadLatencyModel) -> Result<Vec<f64>> {
    if !(model.tau0 > 0.0) {
        return Err(Error::Config("read latency tau0 must be positive".into()));
    }
    let tmr_nom = sample.nominal_params().tmr;
    Ok(sample
        .bits()
        .iter()
        .map(|v| model.tau0 * math::powf(tmr_nom / v.tmr, model.exponent))
        .collect())
}

/// One histogram bin: `[low, high)` except the last bin which is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatencySummary {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Deterministic summary with `bins` equal-width histogram bins over
/// `[min, max]`.
pub fn summarize(values: &[f64], bins: usize) -> Result<LatencySummary> {
    if values.is_empty() {
        return Err(Error::Domain("cannot summarize an empty sample".into()));
    }
    let n = values.len() as f64;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // A constant sample is exactly degenerate, no rounding residue.
    let (mean, sd) = if min == max {
        (min, 0.0)
    } else {
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (mean, math::sqrt(var))
    };

    let histogram = if max == min {
        alloc::vec![HistogramBin {
            low: min,
            high: max,
            count: values.len() as u64,
        }]
    } else {
        let bins = bins.max(1);
        let width = (max - min) / bins as f64;
        let mut hist: Vec<HistogramBin> = (0..bins)
            .map(|i| HistogramBin {
                low: min + i as f64 * width,
                high: min + (i + 1) as f64 * width,
                count: 0,
            })
            .collect();
        for &v in values {
            let idx = (((v - min) / width) as usize).min(bins - 1);
            hist[idx].count += 1;
        }
        hist
    };

    Ok(LatencySummary {
        mean,
        sd,
        min,
        max,
        histogram,
    })
}

/// Per-bit latency distribution for the requested access kind.
pub fn latency_distribution(
    sample: &PvSample,
    temperature_k: f64,
    kind: LatencyKind,
    read_model: &ReadLatencyModel,
    bins: usize,
) -> Result<LatencySummary> {
    let values = match kind {
        LatencyKind::Write => write_latencies(sample, temperature_k)?,
        LatencyKind::Read => read_latencies(sample, read_model)?,
    };
    summarize(&values, bins)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    GumbelFit,
    GaussianOrderStatistic,
}

/// Expected worst case over a population, extrapolated from a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub population_size: u64,
    pub estimated_max: f64,
    pub mean: f64,
    pub ratio_max_to_mean: f64,
    pub method: TailMethod,
}

/// Result of [`evt_extrapolate`]: a block-maxima Gumbel fit plus a
/// closed-form Gaussian-order-statistic cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct TailExtrapolation {
    pub gumbel: TailEstimate,
    pub gaussian: TailEstimate,
    pub sample_max: f64,
    /// Set when the sample is constant; no fit is attempted and both
    /// ratios are 1.
    pub degenerate: bool,
}

/// Minimum sample size for a tail fit.
pub const EVT_MIN_SAMPLES: usize = 1000;

/// Number of blocks used for the block-maxima fit.
pub const EVT_BLOCKS: usize = 50;

/// Fit a Gumbel distribution to block maxima of `latencies` (block size
/// `ceil(n / 50)`) and evaluate the expected maximum over
/// `target_population` devices. The Gaussian order-statistic estimate
/// `mean + sd * sqrt(2 ln N)` is reported alongside for cross-checking.
pub fn evt_extrapolate(latencies: &[f64], target_population: u64) -> Result<TailExtrapolation> {
    let n = latencies.len();
    if n < EVT_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            need: EVT_MIN_SAMPLES,
        });
    }
    if target_population < n as u64 {
        return Err(Error::Domain(alloc::format!(
            "target population {target_population} is smaller than the sample size {n}"
        )));
    }
    let mean = latencies.iter().sum::<f64>() / n as f64;
    let var = latencies
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n as f64;
    let sd = math::sqrt(var);
    let sample_max = latencies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    if sd == 0.0 || sample_max == latencies.iter().cloned().fold(f64::INFINITY, f64::min) {
        let flat = |method| TailEstimate {
            population_size: target_population,
            estimated_max: mean,
            mean,
            ratio_max_to_mean: 1.0,
            method,
        };
        return Ok(TailExtrapolation {
            gumbel: flat(TailMethod::GumbelFit),
            gaussian: flat(TailMethod::GaussianOrderStatistic),
            sample_max,
            degenerate: true,
        });
    }

    // Block maxima, method-of-moments Gumbel fit.
    let block = n.div_ceil(EVT_BLOCKS);
    let maxima: Vec<f64> = latencies
        .chunks_exact(block)
        .map(|c| c.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let m = maxima.len() as f64;
    let bm_mean = maxima.iter().sum::<f64>() / m;
    let bm_var = maxima
        .iter()
        .map(|v| (v - bm_mean) * (v - bm_mean))
        .sum::<f64>()
        / m;
    let scale = math::sqrt(6.0 * bm_var) / core::f64::consts::PI;
    let location = bm_mean - EULER_MASCHERONI * scale;

    // The maximum over N devices is the maximum of N/block block maxima;
    // for Gumbel that shifts the location by scale * ln(N/block).
    let shift = math::ln(target_population as f64 / block as f64);
    let gumbel_max = (location + scale * (shift + EULER_MASCHERONI)).max(sample_max);

    let gauss_max = mean + sd * math::sqrt(2.0 * math::ln(target_population as f64));

    Ok(TailExtrapolation {
        gumbel: TailEstimate {
            population_size: target_population,
            estimated_max: gumbel_max,
            mean,
            ratio_max_to_mean: gumbel_max / mean,
            method: TailMethod::GumbelFit,
        },
        gaussian: TailEstimate {
            population_size: target_population,
            estimated_max: gauss_max,
            mean,
            ratio_max_to_mean: gauss_max / mean,
            method: TailMethod::GaussianOrderStatistic,
        },
        sample_max,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::DeviceParams;

    #[test]
    fn zero_sigma_gives_identical_copies() {
        let nominal = DeviceParams::default();
        let s = sample_devices(&nominal, &PvModel::zero(), 100, 7).unwrap();
        for v in s.bits() {
            assert_eq!(v.delta_mult, 1.0);
            assert_eq!(v.r_low, nominal.r_low);
            assert_eq!(v.tmr, nominal.tmr);
        }
    }

    #[test]
    fn same_seed_bit_identical() {
        let nominal = DeviceParams::default();
        let model = PvModel::default();
        let a = sample_devices(&nominal, &model, 500, 11).unwrap();
        let b = sample_devices(&nominal, &model, 500, 11).unwrap();
        assert_eq!(a, b);
        let c = sample_devices(&nominal, &model, 500, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_is_prefix_stable() {
        // Per-bit streams: the first k bits of a larger sample equal a
        // smaller sample.
        let nominal = DeviceParams::default();
        let model = PvModel::default();
        let small = sample_devices(&nominal, &model, 100, 3).unwrap();
        let large = sample_devices(&nominal, &model, 1000, 3).unwrap();
        assert_eq!(small.bits(), &large.bits()[..100]);
    }

    #[test]
    fn empirical_sigma_matches_model() {
        let nominal = DeviceParams::default();
        let model = PvModel {
            sigma_delta_rel: 0.05,
            ..PvModel::default()
        };
        let s = sample_devices(&nominal, &model, 5000, 1).unwrap();
        let mults: Vec<f64> = s.bits().iter().map(|v| v.delta_mult).collect();
        let sum = summarize(&mults, 10).unwrap();
        let rel = sum.sd / sum.mean;
        assert!((0.045..=0.055).contains(&rel), "rel sigma = {rel}");
    }

    #[test]
    fn bad_sigma_rejected() {
        let model = PvModel {
            sigma_delta_rel: 0.6,
            ..PvModel::default()
        };
        assert!(matches!(model.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn zero_variance_summary() {
        let nominal = DeviceParams::default();
        let s = PvSample::nominal(&nominal, 64).unwrap();
        let d = latency_distribution(
            &s,
            300.0,
            LatencyKind::Write,
            &ReadLatencyModel::default(),
            20,
        )
        .unwrap();
        assert_eq!(d.sd, 0.0);
        assert_eq!(d.max, d.mean);
        assert_eq!(d.histogram.len(), 1);
        assert_eq!(d.histogram[0].count, 64);
    }

    #[test]
    fn evt_requires_enough_samples() {
        let v = alloc::vec![1.0; 10];
        assert!(matches!(
            evt_extrapolate(&v, 1000),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn degenerate_sample_flags() {
        let v = alloc::vec![2.5e-9; 2000];
        let t = evt_extrapolate(&v, 1_000_000).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.gumbel.ratio_max_to_mean, 1.0);
        assert_eq!(t.gaussian.ratio_max_to_mean, 1.0);
    }

    #[test]
    fn estimate_monotone_in_population() {
        let nominal = DeviceParams::default();
        let s = sample_devices(&nominal, &PvModel::default(), 5000, 1).unwrap();
        let lat = write_latencies(&s, 300.0).unwrap();
        let mut last = 0.0;
        for target in [5_000u64, 100_000, 10_000_000, 67_108_864] {
            let t = evt_extrapolate(&lat, target).unwrap();
            assert!(t.gumbel.estimated_max >= last);
            assert!(t.gumbel.estimated_max >= t.sample_max);
            last = t.gumbel.estimated_max;
        }
    }

    #[test]
    fn self_consistency_at_sample_size() {
        let nominal = DeviceParams::default();
        let s = sample_devices(&nominal, &PvModel::default(), 5000, 1).unwrap();
        let lat = write_latencies(&s, 300.0).unwrap();
        let t = evt_extrapolate(&lat, 5000).unwrap();
        let rel = (t.gumbel.estimated_max - t.sample_max).abs() / t.sample_max;
        assert!(rel < 0.05, "rel = {rel}");
    }

    #[test]
    fn write_ratio_grows_with_sigma() {
        let nominal = DeviceParams::default();
        let mut last_ratio = 0.0;
        for sigma in [0.02, 0.04, 0.08, 0.12] {
            let model = PvModel {
                sigma_delta_rel: sigma,
                ..PvModel::default()
            };
            let s = sample_devices(&nominal, &model, 5000, 1).unwrap();
            let lat = write_latencies(&s, 300.0).unwrap();
            let t = evt_extrapolate(&lat, 67_108_864).unwrap();
            assert!(
                t.gumbel.ratio_max_to_mean > last_ratio,
                "sigma {sigma}: ratio {}",
                t.gumbel.ratio_max_to_mean
            );
            last_ratio = t.gumbel.ratio_max_to_mean;
        }
    }
}
