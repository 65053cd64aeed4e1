//! Float math routed through std or libm depending on the build.

#![allow(dead_code)]

macro_rules! shim {
    ($name:ident, $std:ident) => {
        #[cfg(feature = "std")]
        #[inline(always)]
        pub(crate) fn $name(x: f64) -> f64 {
            x.$std()
        }
        #[cfg(not(feature = "std"))]
        #[inline(always)]
        pub(crate) fn $name(x: f64) -> f64 {
            libm::$name(x)
        }
    };
}

shim!(sqrt, sqrt);
shim!(floor, floor);
shim!(ceil, ceil);
shim!(round, round);
shim!(fabs, abs);
shim!(cos, cos);
shim!(sin, sin);
shim!(log, ln);

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    y.atan2(x)
}
#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline(always)]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    sqrt(x * x + y * y)
}
