//! Thin transcendental shim and small shared helpers.
//!
//! The crate builds without `std`, where `f64` lacks `cos`, `exp`, etc.
//! Everything routes through `libm` unconditionally, so std and no_std builds
//! produce bit-identical numbers.

use core::f64::consts::{PI, TAU};

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Reduce an angle to the principal interval (-pi, pi], with +pi kept at the
/// branch boundary.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

/// n! as f64; exact for the small n used here.
pub fn factorial(n: usize) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// The small-field growth constant C(N) = 2(1 + 2 N^{3/2}) controlling how a
/// plaquette action is dominated by the squared bond-field norms.
pub fn small_field_constant(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (1.0 + 2.0 * nf * sqrt(nf))
}
