//! Behavioral simulator and analysis library for supply-current
//! side-channel attacks on word-parallel STTRAM writes.
//!
//! The crate models:
//!
//! - MTJ device physics ([`device`]): thermal stability, retention, write
//!   latency, resistance and current levels from a handful of calibrated
//!   anchors.
//! - Process variation ([`variation`]): seeded per-bit Monte Carlo and
//!   extreme-value extrapolation of worst-case latency to array scale.
//! - Trace synthesis ([`trace`]): supply-current waveforms for
//!   word-parallel writes and reads under constant-voltage or
//!   constant-current drivers, with environment effects and noise.
//! - The attack ([`attack`]): SPA/DPA Hamming-weight inference from
//!   current levels and the residual-candidate effort metric.
//! - Countermeasures ([`defense`]): parity and random-bit encodings,
//!   retention scaling, and exhaustive leakage-state analysis.
//!
//! Everything is a pure function of its inputs and an explicit seed, so
//! results are reproducible bit-for-bit regardless of evaluation order or
//! thread count.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature and enable `libm`.

#![cfg_attr(not(feature = "std"), no_std)]
// Validation guards are written as `!(x > 0.0)` on purpose: the negated
// form rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod attack;
mod comb;
pub mod defense;
pub mod device;
pub mod error;
mod math;
mod randn;
pub mod trace;
pub mod variation;
pub mod word;

pub use error::{Error, Result};
