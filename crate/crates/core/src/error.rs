//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical precondition was violated (non-positive geometry,
    /// temperature, voltage, ...).
    Domain(String),
    /// A configuration value violates a model invariant.
    Config(String),
    /// A bit's switch time exceeded the wordline pulse during trace
    /// synthesis.
    WriteFailure {
        bit: usize,
        switch_time_s: f64,
        wordline_pulse_s: f64,
    },
    /// A sampling window contains no trace samples.
    EmptyWindow,
    /// Mismatched shapes (word widths, trace lengths, sample counts).
    ShapeMismatch(String),
    /// Not enough data points for a statistical fit.
    TooFewSamples { got: usize, need: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::WriteFailure {
                bit,
                switch_time_s,
                wordline_pulse_s,
            } => write!(
                f,
                "write failure: bit {bit} switch time {switch_time_s:.3e} s exceeds \
                 wordline pulse {wordline_pulse_s:.3e} s"
            ),
            Error::EmptyWindow => write!(f, "sampling window contains no samples"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::TooFewSamples { got, need } => {
                write!(f, "too few samples: got {got}, need at least {need}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
