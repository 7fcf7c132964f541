//! Strict TOML run configuration: every key optional, unknown keys
//! rejected, defaults identical to the library defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sttlab_core::defense::EncodingScheme;
use sttlab_core::device::{DeviceParams, RetentionFit};
use sttlab_core::trace::{DriverMode, TraceConfig};
use sttlab_core::variation::{PvDistribution, PvModel, ReadLatencyModel};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// "constant-voltage" or "constant-current".
    pub driver: String,
    /// "none", "parity1" or "random-N" (N in 1..=8).
    pub scheme: String,
    pub seed: u64,
    pub device: DeviceSection,
    pub pv: PvSection,
    pub read_model: ReadModelSection,
    pub retention: RetentionSection,
    pub env: EnvSection,
    pub trace: TraceSection,
    pub cc: CcSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            driver: "constant-voltage".into(),
            scheme: "none".into(),
            seed: 0,
            device: DeviceSection::default(),
            pv: PvSection::default(),
            read_model: ReadModelSection::default(),
            retention: RetentionSection::default(),
            env: EnvSection::default(),
            trace: TraceSection::default(),
            cc: CcSection::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceSection {
    pub k_u: f64,
    pub area: f64,
    pub thickness: f64,
    pub tmr: f64,
    pub r_low: f64,
    pub v_write_eff: f64,
    pub v_supply: f64,
    pub read_current_fraction: f64,
    pub tau0: f64,
    pub delta0: f64,
    pub dir_asymmetry: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        let d = DeviceParams::default();
        DeviceSection {
            k_u: d.k_u,
            area: d.area,
            thickness: d.thickness,
            tmr: d.tmr,
            r_low: d.r_low,
            v_write_eff: d.v_write_eff,
            v_supply: d.v_supply,
            read_current_fraction: d.read_current_fraction,
            tau0: d.tau0,
            delta0: d.delta0,
            dir_asymmetry: d.dir_asymmetry,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PvSection {
    pub sigma_delta_rel: f64,
    pub sigma_r_rel: f64,
    pub sigma_tmr_rel: f64,
    /// "normal" or "lognormal".
    pub distribution: String,
}

impl Default for PvSection {
    fn default() -> Self {
        let m = PvModel::default();
        PvSection {
            sigma_delta_rel: m.sigma_delta_rel,
            sigma_r_rel: m.sigma_r_rel,
            sigma_tmr_rel: m.sigma_tmr_rel,
            distribution: "normal".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReadModelSection {
    pub tau0: f64,
    pub exponent: f64,
}

impl Default for ReadModelSection {
    fn default() -> Self {
        let m = ReadLatencyModel::default();
        ReadModelSection {
            tau0: m.tau0,
            exponent: m.exponent,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RetentionSection {
    pub c: f64,
    pub k: f64,
}

impl Default for RetentionSection {
    fn default() -> Self {
        let f = RetentionFit::default();
        RetentionSection { c: f.c, k: f.k }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvSection {
    pub temperature_k: f64,
    pub magnetic_tamper_factor: f64,
}

impl Default for EnvSection {
    fn default() -> Self {
        EnvSection {
            temperature_k: 300.0,
            magnetic_tamper_factor: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TraceSection {
    pub sample_rate_hz: f64,
    pub smoothing_tau_s: Option<f64>,
    /// Measurement noise sigma, A; when absent, 1% of the all-parallel
    /// word write current.
    pub noise_sigma: Option<f64>,
}

impl Default for TraceSection {
    fn default() -> Self {
        let t = TraceConfig::default();
        TraceSection {
            sample_rate_hz: t.sample_rate_hz,
            smoothing_tau_s: t.smoothing_tau_s,
            noise_sigma: None,
        }
    }
}

/// Constant-current driver knobs; only used when `driver = "constant-current"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CcSection {
    pub i_write: f64,
    pub tau_slow: f64,
}

impl Default for CcSection {
    fn default() -> Self {
        match DriverMode::constant_current_default() {
            DriverMode::ConstantCurrent { i_write, tau_slow } => CcSection { i_write, tau_slow },
            DriverMode::ConstantVoltage => unreachable!(),
        }
    }
}

impl RunConfig {
    /// Load from a TOML file; `None` yields all defaults. Re-validates
    /// every library invariant so a bad config fails at load, not mid-run.
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let config = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    if e.kind() == std::io::ErrorKind::NotFound {
                        CliError::MissingFile(p.display().to_string())
                    } else {
                        CliError::Io(e.to_string())
                    }
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.device_params().validate()?;
        self.pv_model()?.validate()?;
        self.driver_mode()?.validate()?;
        self.scheme()?;
        self.retention_fit().validate()?;
        self.trace_config().validate()?;
        let rm = self.read_model_typed();
        if !(rm.tau0 > 0.0) || !(rm.exponent > 0.0) {
            return Err(CliError::Invariant(
                "read_model tau0 and exponent must be strictly positive".into(),
            ));
        }
        if !(self.env.temperature_k > 0.0) {
            return Err(CliError::Invariant(
                "env.temperature_k must be strictly positive".into(),
            ));
        }
        if !(self.env.magnetic_tamper_factor >= 1.0) {
            return Err(CliError::Invariant(
                "env.magnetic_tamper_factor must be >= 1".into(),
            ));
        }
        if let Some(sigma) = self.trace.noise_sigma {
            if !(sigma >= 0.0) {
                return Err(CliError::Invariant(
                    "trace.noise_sigma must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn device_params(&self) -> DeviceParams {
        let d = &self.device;
        DeviceParams {
            k_u: d.k_u,
            area: d.area,
            thickness: d.thickness,
            tmr: d.tmr,
            r_low: d.r_low,
            v_write_eff: d.v_write_eff,
            v_supply: d.v_supply,
            read_current_fraction: d.read_current_fraction,
            tau0: d.tau0,
            delta0: d.delta0,
            dir_asymmetry: d.dir_asymmetry,
        }
    }

    pub fn pv_model(&self) -> Result<PvModel> {
        let distribution = match self.pv.distribution.as_str() {
            "normal" => PvDistribution::Normal,
            "lognormal" => PvDistribution::Lognormal,
            other => {
                return Err(CliError::Invariant(format!(
                    "unknown pv.distribution {other:?}; expected \"normal\" or \"lognormal\""
                )))
            }
        };
        Ok(PvModel {
            sigma_delta_rel: self.pv.sigma_delta_rel,
            sigma_r_rel: self.pv.sigma_r_rel,
            sigma_tmr_rel: self.pv.sigma_tmr_rel,
            distribution,
        })
    }

    pub fn read_model_typed(&self) -> ReadLatencyModel {
        ReadLatencyModel {
            tau0: self.read_model.tau0,
            exponent: self.read_model.exponent,
        }
    }

    pub fn retention_fit(&self) -> RetentionFit {
        RetentionFit {
            c: self.retention.c,
            k: self.retention.k,
        }
    }

    pub fn trace_config(&self) -> TraceConfig {
        TraceConfig {
            sample_rate_hz: self.trace.sample_rate_hz,
            smoothing_tau_s: self.trace.smoothing_tau_s,
        }
    }

    pub fn driver_mode(&self) -> Result<DriverMode> {
        match self.driver.as_str() {
            "constant-voltage" => Ok(DriverMode::ConstantVoltage),
            "constant-current" => Ok(DriverMode::ConstantCurrent {
                i_write: self.cc.i_write,
                tau_slow: self.cc.tau_slow,
            }),
            other => Err(CliError::Invariant(format!(
                "unknown driver {other:?}; expected \"constant-voltage\" or \"constant-current\""
            ))),
        }
    }

    pub fn scheme(&self) -> Result<EncodingScheme> {
        parse_scheme(&self.scheme)
    }

    /// Effective config (all defaults filled) as canonical TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Hex SHA-256 of the effective config text; stamped into every
    /// output's sidecar so artifacts are traceable to the run setup.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }
}

pub fn parse_scheme(s: &str) -> Result<EncodingScheme> {
    match s {
        "none" => Ok(EncodingScheme::None),
        "parity1" => Ok(EncodingScheme::Parity1),
        _ => {
            if let Some(n) = s.strip_prefix("random-") {
                let bits: u8 = n.parse().map_err(|_| {
                    CliError::Invariant(format!("bad random scheme {s:?}; expected random-N"))
                })?;
                if bits == 0 || bits > sttlab_core::defense::MAX_RANDOM_BITS {
                    return Err(CliError::Invariant(format!(
                        "random bit count must be in 1..={}, got {bits}",
                        sttlab_core::defense::MAX_RANDOM_BITS
                    )));
                }
                Ok(EncodingScheme::Random { bits })
            } else {
                Err(CliError::Invariant(format!(
                    "unknown scheme {s:?}; expected \"none\", \"parity1\" or \"random-N\""
                )))
            }
        }
    }
}

pub fn scheme_name(scheme: EncodingScheme) -> String {
    match scheme {
        EncodingScheme::None => "none".into(),
        EncodingScheme::Parity1 => "parity1".into(),
        EncodingScheme::Random { bits } => format!("random-{bits}"),
    }
}
