//! Standard-normal sampling (Marsaglia polar method).
//!
//! Self-contained so that noise streams are a pure function of the RNG
//! stream, independent of distribution-crate internals.

use rand::Rng;

use crate::math;

/// One standard-normal draw.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * math::sqrt(-2.0 * math::ln(s) / s);
        }
    }
}
