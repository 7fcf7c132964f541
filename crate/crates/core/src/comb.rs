//! Small combinatorics helpers shared by the attack and defense analyses.

use alloc::vec::Vec;

use crate::math;

/// Binomial coefficient C(n, k) as f64; 0 outside the valid range.
/// Exact for values representable in 53 bits, monotone-stable beyond.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc
}

/// Probability of Hamming weight `w` for a uniform `n`-bit word, for all
/// `w` in `0..=n`.
pub(crate) fn weight_probs(n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut cur = math::exp2(-(n as f64));
    for w in 0..=n {
        p.push(cur);
        cur = cur * (n - w) as f64 / (w + 1) as f64;
    }
    p
}
