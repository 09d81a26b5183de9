//! Scalar math routed through `libm` so results are identical with and
//! without `std`, and across platforms.

pub use core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub fn pow10(x: f64) -> f64 {
    libm::pow(10.0, x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
#[cfg(test)]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

/// Unit-modulus phasor `e^{j·deg}`.
#[inline]
pub fn phasor_deg(deg: f64) -> crate::C64 {
    let (s, c) = sin_cos(deg_to_rad(deg));
    crate::C64::new(c, s)
}

/// Linear power ratio for a value in dB.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    pow10(db / 10.0)
}
