//! Float helpers routed through `libm` so the crate builds without `std`
//! and produces bit-identical results on every platform.

pub use libm::{atan2, cos, exp, fabs, floor, hypot, log, pow, round, sin, sqrt, tan};

use rand_core::RngCore;

pub const PI: f64 = core::f64::consts::PI;
pub const TAU: f64 = core::f64::consts::TAU;

/// Wraps an angle to the half-open interval (-pi, pi].
pub fn wrap_angle(angle: f64) -> f64 {
    let r = libm::remainder(angle, TAU);
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Uniform draw in [0, 1) from the top 53 bits of the generator.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [-amplitude, amplitude).
pub fn uniform_symmetric(rng: &mut impl RngCore, amplitude: f64) -> f64 {
    amplitude * (2.0 * uniform(rng) - 1.0)
}

/// Standard normal draw via Box-Muller; transcendentals come from `libm`
/// so the byte sequence is pinned by the seed alone.
pub fn gaussian(rng: &mut impl RngCore) -> f64 {
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = uniform(rng);
    sqrt(-2.0 * log(u1)) * cos(TAU * u2)
}
