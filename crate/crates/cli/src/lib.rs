// Validation guards are written as `!(x > 0.0)` on purpose: the negated
// form rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;
