//! Adversary engine: SPA level quantization, DPA trace averaging,
//! Hamming-weight inference and effort metrics.
//!
//! The attacker is assumed to know the nominal device parameters and the
//! driver mode; expected current levels are computed, not learned.
//! Process variation in the victim shows up as unmodeled noise.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comb::binomial;
use crate::defense::{words_for_level, EncodingScheme};
use crate::device::{AccessMode, BitState, DeviceParams, SwitchDirection};
use crate::error::{Error, Result};
use crate::math;
use crate::trace::{
    nominal_switch_time, synthesize_write_trace, CurrentTrace, DriverMode, Environment,
    TraceConfig, WriteTransaction,
};
use crate::variation::PvSample;
use crate::word::Word;

/// Pre-switch window, as fractions of the fastest nominal switch time.
pub const PRE_WINDOW_FRACTIONS: (f64, f64) = (0.05, 0.80);

/// Post-switch window start, as a multiple of the slowest nominal switch
/// time; the window runs to the end of the wordline pulse.
pub const POST_WINDOW_START_FACTOR: f64 = 1.2;

/// Attacker-side configuration: expected levels and sampling windows for
/// one transaction shape.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackConfig {
    /// Width of the written (encoded) word.
    pub width: usize,
    pub driver: DriverMode,
    pub params: DeviceParams,
    pub env: Environment,
    /// Expected level for m anti-parallel bits: (n-m)*I_P + m*I_AP.
    levels: Vec<f64>,
    pre_window: (f64, f64),
    post_window: (f64, f64),
}

impl AttackConfig {
    pub fn new(
        width: usize,
        driver: DriverMode,
        params: DeviceParams,
        env: Environment,
    ) -> Result<Self> {
        if width == 0 {
            return Err(Error::Domain("width must be at least 1".into()));
        }
        params.validate()?;
        driver.validate()?;
        env.validate()?;

        let delta = params.thermal_stability(env.temperature_k)?;
        let slowest = nominal_switch_time(
            &params,
            delta,
            SwitchDirection::PToAp,
            &driver,
            env.magnetic_tamper_factor,
        )?;
        let fastest = nominal_switch_time(
            &params,
            delta,
            SwitchDirection::ApToP,
            &driver,
            env.magnetic_tamper_factor,
        )?;
        let pre_window = (
            PRE_WINDOW_FRACTIONS.0 * fastest,
            PRE_WINDOW_FRACTIONS.1 * fastest,
        );
        let post_window = (POST_WINDOW_START_FACTOR * slowest, env.wordline_pulse_s);
        if post_window.0 <= pre_window.1 {
            return Err(Error::Config(
                "attack windows overlap; switch-time spread too small".into(),
            ));
        }
        if post_window.0 >= post_window.1 {
            return Err(Error::Config(
                "post-switch window does not fit inside the wordline pulse".into(),
            ));
        }

        let i_p = params.cell_current(BitState::Parallel, AccessMode::Write);
        let i_ap = params.cell_current(BitState::AntiParallel, AccessMode::Write);
        let levels = (0..=width)
            .map(|m| (width - m) as f64 * i_p + m as f64 * i_ap)
            .collect();

        Ok(AttackConfig {
            width,
            driver,
            params,
            env,
            levels,
            pre_window,
            post_window,
        })
    }

    pub fn pre_window(&self) -> (f64, f64) {
        self.pre_window
    }

    pub fn post_window(&self) -> (f64, f64) {
        self.post_window
    }

    pub fn expected_levels(&self) -> &[f64] {
        &self.levels
    }

    /// Current gap between adjacent Hamming-weight levels.
    pub fn level_gap(&self) -> f64 {
        self.levels[0] - self.levels[1]
    }

    /// Nearest expected level index and whether the measurement sits more
    /// than half a level gap away from it.
    fn quantize(&self, level: f64) -> (usize, bool) {
        let mut best = 0usize;
        let mut best_dist = f64::INFINITY;
        for (m, &expected) in self.levels.iter().enumerate() {
            let d = math::abs(level - expected);
            if d < best_dist {
                best = m;
                best_dist = d;
            }
        }
        (best, best_dist > self.level_gap() / 2.0)
    }
}

/// Inferred Hamming weights of the old and new (encoded) words.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackInference {
    pub hw_old_est: Option<usize>,
    pub hw_new_est: Option<usize>,
    /// log2 of the number of (old, new) word pairs consistent with the
    /// observation, under no encoding.
    pub effort_bits: f64,
    /// 2^effort_bits; infinite when the effort exceeds f64 range
    /// (width > 511 with no level information).
    pub residual_candidates: f64,
    /// Set when a window mean sat more than half a level gap from every
    /// expected level.
    pub low_confidence: bool,
}

fn log2_count(c: f64) -> f64 {
    math::log2(c.max(1.0))
}

/// Infer Hamming weights from a single trace by quantizing the pre- and
/// post-switch window means against the expected level table. Under a
/// constant-current driver both weights are unknown and the residual is
/// the full space.
pub fn spa_infer(trace: &CurrentTrace, config: &AttackConfig) -> Result<AttackInference> {
    let n = config.width;
    if let DriverMode::ConstantCurrent { .. } = config.driver {
        let effort = 2.0 * n as f64;
        return Ok(AttackInference {
            hw_old_est: None,
            hw_new_est: None,
            effort_bits: effort,
            residual_candidates: math::exp2(effort),
            low_confidence: false,
        });
    }
    let pre = trace.sample_window(config.pre_window.0, config.pre_window.1)?;
    let post = trace.sample_window(config.post_window.0, config.post_window.1)?;
    let (hw_old, flag_old) = config.quantize(pre);
    let (hw_new, flag_new) = config.quantize(post);
    let effort = log2_count(binomial(n, hw_old)) + log2_count(binomial(n, hw_new));
    Ok(AttackInference {
        hw_old_est: Some(hw_old),
        hw_new_est: Some(hw_new),
        effort_bits: effort,
        residual_candidates: math::exp2(effort),
        low_confidence: flag_old || flag_new,
    })
}

/// Average repeated traces of the same transaction, then run SPA on the
/// average. Effective noise drops as 1/sqrt(K).
pub fn dpa_infer(traces: &[CurrentTrace], config: &AttackConfig) -> Result<AttackInference> {
    let avg = CurrentTrace::average(traces)?;
    spa_infer(&avg, config)
}

/// Candidate-pair count and effort for an inference, accounting for the
/// encoding scheme. Inferred weights are weights of the encoded words;
/// candidates are counted over data words of `data_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSpace {
    pub candidates: f64,
    pub effort_bits: f64,
}

pub fn candidate_space(
    inference: &AttackInference,
    data_width: usize,
    scheme: EncodingScheme,
) -> Result<CandidateSpace> {
    scheme.validate(data_width)?;
    let direction = |hw: Option<usize>| -> f64 {
        match hw {
            Some(h) => words_for_level(data_width, scheme, h).max(1.0),
            None => math::exp2(data_width as f64),
        }
    };
    let c_old = direction(inference.hw_old_est);
    let c_new = direction(inference.hw_new_est);
    Ok(CandidateSpace {
        candidates: c_old * c_new,
        effort_bits: log2_count(c_old) + log2_count(c_new),
    })
}

/// Batch evaluation harness parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub params: DeviceParams,
    pub driver: DriverMode,
    pub scheme: EncodingScheme,
    pub data_width: usize,
    pub temperature_k: f64,
    pub magnetic_tamper_factor: f64,
    pub trials: usize,
    /// Traces averaged per trial (1 = plain SPA).
    pub traces_per_trial: usize,
    pub noise_sigma: f64,
    pub trace_config: TraceConfig,
    pub seed: u64,
}

/// One campaign trial outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub hw_old_true: usize,
    pub hw_new_true: usize,
    pub hw_old_est: Option<usize>,
    pub hw_new_est: Option<usize>,
    pub correct_old: bool,
    pub correct_new: bool,
    pub effort_bits: f64,
}

/// Aggregated campaign results.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub trials: usize,
    pub hw_accuracy_old: f64,
    pub hw_accuracy_new: f64,
    pub mean_effort_bits: f64,
    pub records: Vec<TrialRecord>,
}

/// Shared per-campaign state; trials are independent and can be evaluated
/// in any order or in parallel.
#[derive(Debug, Clone)]
pub struct CampaignContext {
    spec: CampaignSpec,
    attack_config: AttackConfig,
    devices: PvSample,
}

impl CampaignContext {
    pub fn new(spec: CampaignSpec) -> Result<Self> {
        if spec.trials == 0 {
            return Err(Error::Domain("campaign needs at least one trial".into()));
        }
        if spec.traces_per_trial == 0 {
            return Err(Error::Domain(
                "campaign needs at least one trace per trial".into(),
            ));
        }
        spec.scheme.validate(spec.data_width)?;
        let encoded_width = spec.data_width + spec.scheme.overhead_bits();
        let env = Environment::for_device(
            &spec.params,
            &spec.driver,
            spec.temperature_k,
            spec.magnetic_tamper_factor,
        )?;
        let attack_config =
            AttackConfig::new(encoded_width, spec.driver.clone(), spec.params.clone(), env)?;
        let devices = PvSample::nominal(&spec.params, encoded_width)?;
        Ok(CampaignContext {
            spec,
            attack_config,
            devices,
        })
    }

    pub fn spec(&self) -> &CampaignSpec {
        &self.spec
    }

    pub fn attack_config(&self) -> &AttackConfig {
        &self.attack_config
    }

    /// Run one trial. Deterministic in `(spec, trial index)`.
    pub fn run_trial(&self, trial: usize) -> Result<TrialRecord> {
        let spec = &self.spec;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(trial as u64);

        let old_data = Word::random(spec.data_width, &mut rng)?;
        let new_data = Word::random(spec.data_width, &mut rng)?;
        let old = spec.scheme.encode(&old_data, rng.gen())?;
        let new = spec.scheme.encode(&new_data, rng.gen())?;
        let hw_old_true = old.hamming_weight();
        let hw_new_true = new.hamming_weight();

        let txn = WriteTransaction {
            old,
            new,
            driver: spec.driver.clone(),
            devices: self.devices.clone(),
            env: self.attack_config.env.clone(),
        };
        let traces: Vec<CurrentTrace> = (0..spec.traces_per_trial)
            .map(|_| synthesize_write_trace(&txn, &spec.trace_config, spec.noise_sigma, rng.gen()))
            .collect::<Result<_>>()?;
        let inference = dpa_infer(&traces, &self.attack_config)?;

        // An unknown weight scores as a uniform random guess, so the
        // constant-current accuracy sits at chance level.
        let width = self.attack_config.width;
        let mut score = |est: Option<usize>, truth: usize| match est {
            Some(h) => h == truth,
            None => rng.gen_range(0..=width) == truth,
        };
        let correct_old = score(inference.hw_old_est, hw_old_true);
        let correct_new = score(inference.hw_new_est, hw_new_true);

        let space = candidate_space(&inference, spec.data_width, spec.scheme)?;
        Ok(TrialRecord {
            hw_old_true,
            hw_new_true,
            hw_old_est: inference.hw_old_est,
            hw_new_est: inference.hw_new_est,
            correct_old,
            correct_new,
            effort_bits: space.effort_bits,
        })
    }

    /// Order-insensitive aggregation of trial records.
    pub fn aggregate(&self, records: Vec<TrialRecord>) -> CampaignReport {
        let n = records.len() as f64;
        let correct_old = records.iter().filter(|r| r.correct_old).count() as f64;
        let correct_new = records.iter().filter(|r| r.correct_new).count() as f64;
        let effort: f64 = records.iter().map(|r| r.effort_bits).sum();
        CampaignReport {
            trials: records.len(),
            hw_accuracy_old: correct_old / n,
            hw_accuracy_new: correct_new / n,
            mean_effort_bits: effort / n,
            records,
        }
    }
}

/// Run a full campaign serially.
pub fn attack_campaign(spec: CampaignSpec) -> Result<CampaignReport> {
    let ctx = CampaignContext::new(spec)?;
    let records = (0..ctx.spec.trials)
        .map(|i| ctx.run_trial(i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ctx.aggregate(records))
}
