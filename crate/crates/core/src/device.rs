//! Closed-form MTJ device physics: thermal stability, retention, write
//! latency, resistance and current levels.
//!
//! The model is anchored on two calibration points: a 40 nm x 40 nm x 4 nm
//! free layer has a thermal stability factor of 40 at 300 K (10 year
//! retention), and the slow write direction takes 0.59 ns at 1 V supply at
//! that stability.

use crate::error::{Error, Result};
use crate::math;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Seconds in a Julian year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;

/// Retention times saturate here instead of overflowing.
pub const RETENTION_MAX_S: f64 = 1e18;

/// Default anisotropy energy density, J/m^3, solved so that the default
/// 40x40x4 nm free layer has a stability factor of exactly 40 at 300 K.
pub const DEFAULT_K_U: f64 = 40.0 * BOLTZMANN * 300.0 / (40e-9 * 40e-9 * 4e-9);

/// Magnetization state of the free layer relative to the pinned layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitState {
    /// Parallel: stores '0', low resistance.
    Parallel,
    /// Anti-parallel: stores '1', high resistance.
    AntiParallel,
}

impl BitState {
    /// Fixed logical mapping: '0' is parallel, '1' is anti-parallel.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            BitState::AntiParallel
        } else {
            BitState::Parallel
        }
    }

    pub fn to_bit(self) -> bool {
        self == BitState::AntiParallel
    }
}

/// Write direction. P->AP is the slow direction; AP->P is faster by the
/// device's `dir_asymmetry` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchDirection {
    PToAp,
    ApToP,
}

/// Cell access kind for current computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessMode {
    /// Constant-voltage write.
    Write,
    /// Read access (sub-critical current).
    Read,
}

/// Nominal MTJ and driver parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams {
    /// Anisotropy energy density, J/m^3. Lumps the H_k * M_s product.
    pub k_u: f64,
    /// Free-layer area, m^2.
    pub area: f64,
    /// Free-layer thickness, m.
    pub thickness: f64,
    /// Tunnel magnetoresistance ratio, (R_H - R_L) / R_L.
    pub tmr: f64,
    /// Parallel-state resistance R_L, ohms.
    pub r_low: f64,
    /// Effective write voltage across the cell, V (after access-transistor
    /// drop).
    pub v_write_eff: f64,
    /// Nominal supply voltage, V; drives the latency law.
    pub v_supply: f64,
    /// Read current as a fraction of the parallel-state write current.
    pub read_current_fraction: f64,
    /// Write-latency anchor: latency at `delta0`, 1 V supply, slow
    /// direction, seconds.
    pub tau0: f64,
    /// Anchor thermal stability for the latency law.
    pub delta0: f64,
    /// Ratio of fast-direction (AP->P) to slow-direction (P->AP) switching
    /// time, in (0, 1].
    pub dir_asymmetry: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            k_u: DEFAULT_K_U,
            area: 40e-9 * 40e-9,
            thickness: 4e-9,
            tmr: 1.0,
            r_low: 5e3,
            v_write_eff: 0.75,
            v_supply: 1.0,
            read_current_fraction: 0.2,
            tau0: 0.59e-9,
            delta0: 40.0,
            dir_asymmetry: 0.6,
        }
    }
}

impl DeviceParams {
    /// Check all type invariants.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(alloc::format!(
                    "{name} must be strictly positive and finite, got {v}"
                )))
            }
        }
        positive("k_u", self.k_u)?;
        positive("area", self.area)?;
        positive("thickness", self.thickness)?;
        positive("tmr", self.tmr)?;
        positive("r_low", self.r_low)?;
        positive("v_write_eff", self.v_write_eff)?;
        positive("v_supply", self.v_supply)?;
        positive("tau0", self.tau0)?;
        positive("delta0", self.delta0)?;
        if !(self.dir_asymmetry > 0.0 && self.dir_asymmetry <= 1.0) {
            return Err(Error::Config(alloc::format!(
                "dir_asymmetry must be in (0, 1], got {}",
                self.dir_asymmetry
            )));
        }
        if !(self.read_current_fraction > 0.0 && self.read_current_fraction < 1.0) {
            return Err(Error::Config(alloc::format!(
                "read_current_fraction must be in (0, 1), got {}",
                self.read_current_fraction
            )));
        }
        // Read-disturb guard: the read current must stay below the smallest
        // write current, v_write_eff / r_high.
        if self.read_current_fraction >= 1.0 / (1.0 + self.tmr) {
            return Err(Error::Config(alloc::format!(
                "read_current_fraction {} must be below 1/(1+tmr) = {} so the read \
                 current stays below every write current",
                self.read_current_fraction,
                1.0 / (1.0 + self.tmr)
            )));
        }
        Ok(())
    }

    /// Anti-parallel resistance R_H = R_L * (1 + TMR).
    pub fn r_high(&self) -> f64 {
        self.r_low * (1.0 + self.tmr)
    }

    /// Thermal stability factor at the given ambient temperature:
    /// delta = k_u * area * thickness / (k_B * T).
    pub fn thermal_stability(&self, temperature_k: f64) -> Result<f64> {
        if !(temperature_k > 0.0 && temperature_k.is_finite()) {
            return Err(Error::Domain(alloc::format!(
                "temperature must be strictly positive, got {temperature_k}"
            )));
        }
        self.validate()?;
        Ok(self.k_u * self.area * self.thickness / (BOLTZMANN * temperature_k))
    }

    /// Write latency: tau0 * (delta/delta0) * (1 V / supply_voltage),
    /// times `dir_asymmetry` in the fast (AP->P) direction.
    pub fn write_latency(
        &self,
        delta: f64,
        supply_voltage: f64,
        direction: SwitchDirection,
    ) -> Result<f64> {
        if !(delta > 0.0) {
            return Err(Error::Domain(alloc::format!(
                "delta must be strictly positive, got {delta}"
            )));
        }
        if !(supply_voltage > 0.0) {
            return Err(Error::Domain(alloc::format!(
                "supply voltage must be strictly positive, got {supply_voltage}"
            )));
        }
        let dir = match direction {
            SwitchDirection::PToAp => 1.0,
            SwitchDirection::ApToP => self.dir_asymmetry,
        };
        Ok(self.tau0 * (delta / self.delta0) * (1.0 / supply_voltage) * dir)
    }

    /// MTJ resistance in the given state.
    pub fn resistance(&self, state: BitState) -> f64 {
        match state {
            BitState::Parallel => self.r_low,
            BitState::AntiParallel => self.r_high(),
        }
    }

    /// Cell current for a constant-voltage write or a read access. The
    /// read current scales with state resistance the same way the write
    /// current does, just `read_current_fraction` smaller.
    pub fn cell_current(&self, state: BitState, mode: AccessMode) -> f64 {
        let write = self.v_write_eff / self.resistance(state);
        match mode {
            AccessMode::Write => write,
            AccessMode::Read => self.read_current_fraction * write,
        }
    }

    /// Scale the free-layer volume by scaling thickness (area fixed).
    /// The resulting thermal stability is `factor` times the original.
    pub fn scale_volume(&self, factor: f64) -> Result<DeviceParams> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(alloc::format!(
                "volume factor must be strictly positive, got {factor}"
            )));
        }
        let mut scaled = self.clone();
        scaled.thickness *= factor;
        Ok(scaled)
    }
}

/// Exponential retention fit t = c * e^(k * delta).
#[derive(Debug, Clone, PartialEq)]
pub struct RetentionFit {
    /// Fitting constant C, seconds.
    pub c: f64,
    /// Fitting constant k, per unit delta.
    pub k: f64,
}

impl Default for RetentionFit {
    /// Solved from the 10-year-at-delta-40 anchor with k fixed at 1.
    fn default() -> Self {
        RetentionFit {
            c: 10.0 * SECONDS_PER_YEAR / math::exp(40.0),
            k: 1.0,
        }
    }
}

/// Retention time, with a saturation flag when the exponential would
/// exceed [`RETENTION_MAX_S`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetentionTime {
    pub seconds: f64,
    pub saturated: bool,
}

impl RetentionFit {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "retention fit c must be strictly positive, got {}",
                self.c
            )));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "retention fit k must be strictly positive, got {}",
                self.k
            )));
        }
        Ok(())
    }

    /// Retention time t = c * e^(k * delta), saturating at
    /// [`RETENTION_MAX_S`].
    pub fn retention_time(&self, delta: f64) -> Result<RetentionTime> {
        if !(delta >= 0.0) {
            return Err(Error::Domain(alloc::format!(
                "delta must be non-negative, got {delta}"
            )));
        }
        self.validate()?;
        // Compare in log space so very large deltas cannot overflow first.
        let log_t = math::ln(self.c) + self.k * delta;
        if log_t >= math::ln(RETENTION_MAX_S) {
            return Ok(RetentionTime {
                seconds: RETENTION_MAX_S,
                saturated: true,
            });
        }
        Ok(RetentionTime {
            seconds: self.c * math::exp(self.k * delta),
            saturated: false,
        })
    }
}
