//! Float math shims so the crate builds without `std` (via `libm`).

#![allow(dead_code)]

macro_rules! shim {
    ($name:ident, $std_expr:expr, $libm:path) => {
        #[cfg(feature = "std")]
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            $std_expr(x)
        }
        #[cfg(all(not(feature = "std"), feature = "libm"))]
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            $libm(x)
        }
    };
}

shim!(exp, f64::exp, libm::exp);
shim!(exp2, f64::exp2, libm::exp2);
shim!(ln, f64::ln, libm::log);
shim!(log2, f64::log2, libm::log2);
shim!(sqrt, f64::sqrt, libm::sqrt);
shim!(floor, f64::floor, libm::floor);
shim!(ceil, f64::ceil, libm::ceil);
shim!(round, f64::round, libm::round);
shim!(abs, f64::abs, libm::fabs);

#[cfg(feature = "std")]
#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    x.powf(y)
}
#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("sttlab-core requires either the `std` or the `libm` feature");
