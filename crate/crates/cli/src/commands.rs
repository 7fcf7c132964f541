//! Subcommand implementations. Every command loads the config, echoes
//! the effective (defaults-filled) version to the output directory, and
//! stamps each artifact with the config hash and seed.

use std::path::{Path, PathBuf};

use serde_json::json;

use sttlab_core::attack::{CampaignContext, CampaignSpec};
use sttlab_core::defense::{defense_matrix, EncodingScheme};
use sttlab_core::device::{AccessMode, BitState, SwitchDirection};
use sttlab_core::trace::{
    default_noise_sigma, nominal_switch_time, synthesize_read_trace, synthesize_write_trace,
    DriverMode, Environment, WriteTransaction,
};
use sttlab_core::variation::{
    evt_extrapolate, read_latencies, sample_devices, summarize, write_latencies, TailEstimate,
    TailExtrapolation,
};
use sttlab_core::word::Word;

use crate::config::{parse_scheme, scheme_name, RunConfig};
use crate::error::{CliError, Result};
use crate::io;
use crate::parallel::par_map_indexed;

/// Shared per-invocation state.
pub struct Ctx {
    pub config: RunConfig,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub hash: String,
}

impl Ctx {
    pub fn new(
        config_path: Option<&Path>,
        seed_override: Option<u64>,
        out: &Path,
        threads: usize,
    ) -> Result<Ctx> {
        let mut config = RunConfig::load(config_path)?;
        if let Some(seed) = seed_override {
            config.seed = seed;
        }
        let seed = config.seed;
        std::fs::create_dir_all(out)
            .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
        let hash = config.hash();
        std::fs::write(out.join("effective_config.toml"), config.to_toml())
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Ctx {
            config,
            out: out.to_path_buf(),
            seed,
            threads: threads.max(1),
            hash,
        })
    }

    fn noise_sigma(&self, width: usize) -> f64 {
        self.config
            .trace
            .noise_sigma
            .unwrap_or_else(|| default_noise_sigma(width, &self.config.device_params()))
    }

    fn environment(&self, driver: &DriverMode) -> Result<Environment> {
        Ok(Environment::for_device(
            &self.config.device_params(),
            driver,
            self.config.env.temperature_k,
            self.config.env.magnetic_tamper_factor,
        )?)
    }
}

pub fn device(ctx: &Ctx) -> Result<()> {
    let params = ctx.config.device_params();
    let fit = ctx.config.retention_fit();
    let driver = ctx.config.driver_mode()?;
    let t = ctx.config.env.temperature_k;
    let tamper = ctx.config.env.magnetic_tamper_factor;

    let delta = params.thermal_stability(t)?;
    let retention = fit.retention_time(delta)?;
    let slow = nominal_switch_time(&params, delta, SwitchDirection::PToAp, &driver, tamper)?;
    let fast = nominal_switch_time(&params, delta, SwitchDirection::ApToP, &driver, tamper)?;
    let i_p = params.cell_current(BitState::Parallel, AccessMode::Write);
    let i_ap = params.cell_current(BitState::AntiParallel, AccessMode::Write);

    let report = json!({
        "temperature_k": t,
        "thermal_stability": delta,
        "retention_s": retention.seconds,
        "retention_saturated": retention.saturated,
        "retention_years": retention.seconds / sttlab_core::device::SECONDS_PER_YEAR,
        "switch_time_slow_s": slow,
        "switch_time_fast_s": fast,
        "r_low_ohm": params.r_low,
        "r_high_ohm": params.r_high(),
        "write_current_parallel_a": i_p,
        "write_current_antiparallel_a": i_ap,
        "read_current_parallel_a": params.cell_current(BitState::Parallel, AccessMode::Read),
        "read_current_antiparallel_a": params.cell_current(BitState::AntiParallel, AccessMode::Read),
        "level_gap_a": i_p - i_ap,
    });
    let path = ctx.out.join("device.json");
    io::write_json(&path, &report)?;
    io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    println!(
        "delta = {delta:.6} at {t} K; retention = {} s; slow/fast switch = {slow:.3e}/{fast:.3e} s",
        retention.seconds
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn tail_json(t: &TailExtrapolation) -> serde_json::Value {
    let est = |e: &TailEstimate| {
        json!({
            "population_size": e.population_size,
            "estimated_max": e.estimated_max,
            "mean": e.mean,
            "ratio_max_to_mean": e.ratio_max_to_mean,
        })
    };
    json!({
        "sample_max": t.sample_max,
        "degenerate": t.degenerate,
        "gumbel": est(&t.gumbel),
        "gaussian": est(&t.gaussian),
    })
}

pub fn mc(ctx: &Ctx, count: usize, target_population: u64, bins: usize) -> Result<()> {
    let params = ctx.config.device_params();
    let pv = ctx.config.pv_model()?;
    let sample = sample_devices(&params, &pv, count, ctx.seed)?;
    let wl = write_latencies(&sample, ctx.config.env.temperature_k)?;
    let rl = read_latencies(&sample, &ctx.config.read_model_typed())?;

    for (name, values) in [("write_hist.csv", &wl), ("read_hist.csv", &rl)] {
        let summary = summarize(values, bins)?;
        let path = ctx.out.join(name);
        io::write_hist_csv(&path, &summary.histogram)?;
        io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    }

    let write_tail = evt_extrapolate(&wl, target_population)?;
    let read_tail = evt_extrapolate(&rl, target_population)?;
    let tail = json!({
        "target_population": target_population,
        "samples": count,
        "write": tail_json(&write_tail),
        "read": tail_json(&read_tail),
    });
    let path = ctx.out.join("tail.json");
    io::write_json(&path, &tail)?;
    io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    println!(
        "write tail ratio {:.4} (gumbel) / {:.4} (gaussian); read tail ratio {:.4} (gumbel)",
        write_tail.gumbel.ratio_max_to_mean,
        write_tail.gaussian.ratio_max_to_mean,
        read_tail.gumbel.ratio_max_to_mean
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Accept a word as a binary string, or as hex when `--width` disagrees
/// with a binary reading. Binary is canonical in outputs.
pub fn parse_word(s: &str, width: Option<usize>) -> Result<Word> {
    let looks_binary = !s.is_empty() && s.chars().all(|c| c == '0' || c == '1');
    let word = if looks_binary && width.is_none_or(|w| w == s.len()) {
        Word::from_binary(s)
    } else {
        let width = width.ok_or_else(|| {
            CliError::Invariant(format!("hex word {s:?} needs an explicit --width"))
        })?;
        Word::from_hex(s, width)
    };
    Ok(word?)
}

pub fn trace(
    ctx: &Ctx,
    old: &str,
    new: Option<&str>,
    width: Option<usize>,
    op: &str,
    noise_sigma: Option<f64>,
) -> Result<()> {
    let params = ctx.config.device_params();
    let driver = ctx.config.driver_mode()?;
    let old = parse_word(old, width)?;
    let env = ctx.environment(&driver)?;
    let devices = sample_devices(&params, &ctx.config.pv_model()?, old.width(), ctx.seed)?;
    let sigma = noise_sigma.unwrap_or_else(|| ctx.noise_sigma(old.width()));
    if !(sigma >= 0.0) {
        return Err(CliError::Invariant(
            "noise sigma must be non-negative".into(),
        ));
    }
    let cfg = ctx.config.trace_config();

    let (trace, old_str, new_str) = match op {
        "write" => {
            let new = parse_word(
                new.ok_or_else(|| CliError::Invariant("write traces need --new".into()))?,
                width,
            )?;
            let txn = WriteTransaction {
                old: old.clone(),
                new: new.clone(),
                driver: driver.clone(),
                devices,
                env: env.clone(),
            };
            let t = synthesize_write_trace(&txn, &cfg, sigma, ctx.seed)?;
            (t, old.to_binary(), Some(new.to_binary()))
        }
        "read" => {
            let t = synthesize_read_trace(&old, &devices, &env, &cfg, sigma, ctx.seed)?;
            (t, old.to_binary(), None)
        }
        other => {
            return Err(CliError::Invariant(format!(
                "unknown op {other:?}; expected \"write\" or \"read\""
            )))
        }
    };

    let path = ctx.out.join("trace.csv");
    io::write_trace_csv(&path, &trace)?;
    let meta = json!({
        "config_hash": ctx.hash,
        "seed": ctx.seed,
        "artifact_version": io::ARTIFACT_VERSION,
        "op": op,
        "old": old_str,
        "new": new_str,
        "width": old.width(),
        "driver": ctx.config.driver,
        "noise_sigma_a": sigma,
        "sample_rate_hz": cfg.sample_rate_hz,
        "wordline_pulse_s": env.wordline_pulse_s,
    });
    io::write_json(&path.with_extension("meta.json"), &meta)?;
    println!("{} samples; wrote {}", trace.samples.len(), path.display());
    Ok(())
}

pub fn attack(ctx: &Ctx, trials: usize, traces_per_trial: usize, width: usize) -> Result<()> {
    let spec = CampaignSpec {
        params: ctx.config.device_params(),
        driver: ctx.config.driver_mode()?,
        scheme: ctx.config.scheme()?,
        data_width: width,
        temperature_k: ctx.config.env.temperature_k,
        magnetic_tamper_factor: ctx.config.env.magnetic_tamper_factor,
        trials,
        traces_per_trial,
        noise_sigma: ctx.noise_sigma(width),
        trace_config: ctx.config.trace_config(),
        seed: ctx.seed,
    };
    let campaign = CampaignContext::new(spec)?;
    let records =
        par_map_indexed(trials, ctx.threads, |i| campaign.run_trial(i)).map_err(CliError::from)?;
    let report = campaign.aggregate(records);

    let out = json!({
        "trials": report.trials,
        "accuracy_old": report.hw_accuracy_old,
        "accuracy_new": report.hw_accuracy_new,
        "mean_effort_bits": report.mean_effort_bits,
        "config_hash": ctx.hash,
        "seed": ctx.seed,
    });
    let path = ctx.out.join("campaign.json");
    io::write_json(&path, &out)?;
    io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    println!(
        "accuracy old/new = {:.4}/{:.4}; mean effort = {:.3} bits over {} trials",
        report.hw_accuracy_old, report.hw_accuracy_new, report.mean_effort_bits, report.trials
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Parse "4..64" (inclusive) or "4,8,16".
pub fn parse_widths(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Invariant(format!("bad width list {s:?}; expected A..B or a,b,c"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        let widths: Vec<usize> = s
            .split(',')
            .map(|w| w.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if widths.is_empty() || widths.contains(&0) {
            return Err(bad());
        }
        Ok(widths)
    }
}

pub fn states(ctx: &Ctx, widths: &str, scheme: Option<&str>) -> Result<()> {
    let widths = parse_widths(widths)?;
    let schemes: Vec<EncodingScheme> = match scheme {
        Some(s) => vec![parse_scheme(s)?],
        None => vec![
            EncodingScheme::None,
            EncodingScheme::Parity1,
            EncodingScheme::Random { bits: 1 },
            EncodingScheme::Random { bits: 2 },
        ],
    };
    let drivers = [
        DriverMode::ConstantVoltage,
        DriverMode::ConstantCurrent {
            i_write: ctx.config.cc.i_write,
            tau_slow: ctx.config.cc.tau_slow,
        },
    ];
    let cells = defense_matrix(&widths, &schemes, &drivers)?;
    let rows: Vec<io::MatrixRow> = cells
        .iter()
        .map(|c| io::MatrixRow {
            width: c.width,
            scheme: scheme_name(c.scheme),
            driver: if c.driver_constant_current {
                "constant-current".into()
            } else {
                "constant-voltage".into()
            },
            states: c.states,
            reduction_pct: c.reduction_pct,
            unique_decodable_fraction: c.unique_decodable_fraction,
            mean_posterior_entropy_bits: c.mean_posterior_entropy_bits,
            mean_effort_bits: c.mean_effort_bits,
        })
        .collect();
    let path = ctx.out.join("states.csv");
    io::write_matrix_csv(&path, &rows)?;
    io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    println!("{} rows; wrote {}", rows.len(), path.display());
    Ok(())
}

/// Parse "A:B:STEP" into inclusive grid points.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Invariant(format!("bad range {s:?}; expected A:B:STEP"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let step: f64 = parts[2].trim().parse().map_err(|_| bad())?;
    if !(step > 0.0) || b < a {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| a + i as f64 * step).collect())
}

pub fn sweep(ctx: &Ctx, var: &str, range: &str, metric: &str) -> Result<()> {
    let values = parse_range(range)?;
    let params = ctx.config.device_params();
    let driver = ctx.config.driver_mode()?;
    let fit = ctx.config.retention_fit();
    let tamper = ctx.config.env.magnetic_tamper_factor;

    let mut points = Vec::with_capacity(values.len());
    for &v in &values {
        let (p, t) = match var {
            "temperature" => (params.clone(), v),
            "volume_factor" => (params.scale_volume(v)?, ctx.config.env.temperature_k),
            "supply_voltage" => {
                let mut p = params.clone();
                p.v_supply = v;
                (p, ctx.config.env.temperature_k)
            }
            other => {
                return Err(CliError::Invariant(format!(
                    "unknown sweep variable {other:?}; expected temperature, \
volume_factor or supply_voltage"
                )))
            }
        };
        p.validate()?;
        let delta = p.thermal_stability(t)?;
        let y = match metric {
            "delta" => delta,
            "write_latency" => {
                nominal_switch_time(&p, delta, SwitchDirection::PToAp, &driver, tamper)?
            }
            "retention" => fit.retention_time(delta)?.seconds,
            "write_current" => p.cell_current(BitState::Parallel, AccessMode::Write),
            "level_gap" => {
                p.cell_current(BitState::Parallel, AccessMode::Write)
                    - p.cell_current(BitState::AntiParallel, AccessMode::Write)
            }
            other => {
                return Err(CliError::Invariant(format!(
                    "unknown metric {other:?}; expected delta, write_latency, \
retention, write_current or level_gap"
                )))
            }
        };
        points.push((v, y));
    }

    let path = ctx.out.join("sweep.csv");
    io::write_sweep_csv(&path, var, metric, &points)?;
    io::write_sidecar(&path, &ctx.hash, ctx.seed)?;
    println!("{} points; wrote {}", points.len(), path.display());
    Ok(())
}
