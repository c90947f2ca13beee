//! Free-oscillation decay analysis for the twin-hull stability tests:
//! logarithmic decrement, damping ratio, damped/natural frequencies and
//! damping constants from raw decay rows, plus the second-order stability
//! verdict. This module keeps the test campaign's imperial units
//! (inches, lbs/ft, lbs·sec/ft) verbatim.

use crate::complex::{quadratic_roots, Complex};
use crate::math;

/// Test axis of a decay run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OscillationAxis {
    Roll,
    PitchBack,
    PitchFront,
}

impl OscillationAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            OscillationAxis::Roll => "roll",
            OscillationAxis::PitchBack => "pitch-back",
            OscillationAxis::PitchFront => "pitch-front",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "roll" => Some(OscillationAxis::Roll),
            "pitch-back" => Some(OscillationAxis::PitchBack),
            "pitch-front" => Some(OscillationAxis::PitchFront),
            _ => None,
        }
    }
}

/// One raw free-decay test row.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OscillationRecord {
    pub label: OscillationAxis,
    /// Freeboard setting, inches.
    pub freeboard: f64,
    /// Number of cycles between the two amplitude readings.
    pub n_cycles: u32,
    /// First displacement amplitude, inches.
    pub b1: f64,
    /// Amplitude after `n_cycles` cycles, inches.
    pub b_n1: f64,
    /// Elapsed time over `n_cycles` cycles, s.
    pub delta_t: f64,
    /// Measured stiffness, lbs/ft.
    pub k_stiffness: f64,
}

/// Damping-ratio convention used to derive zeta from the decrement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DampingConvention {
    /// zeta = delta / (4*pi), which reproduces the published campaign
    /// tables row for row.
    #[default]
    Campaign,
    /// zeta = delta / sqrt(4*pi^2 + delta^2), the exact envelope
    /// inversion.
    Textbook,
}

/// Derived quantities for one decay row.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OscillationAnalysis {
    /// Logarithmic decrement, dimensionless.
    pub delta: f64,
    /// Damping ratio, dimensionless, in (0, 1).
    pub zeta: f64,
    /// Damped frequency, rad/s.
    pub omega_d: f64,
    /// Natural frequency, rad/s.
    pub omega_n: f64,
    /// Damping constant, lbs·sec/ft.
    pub c_damping: f64,
    /// Critical damping constant, lbs·sec/ft.
    pub cc_critical: f64,
    /// Oscillation period, s.
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecayError {
    #[error("{field} must be > 0, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("n_cycles must be >= 1")]
    NoCycles,
    #[error("amplitudes describe growth, not decay: b1 = {b1} <= b_n1 = {b_n1}")]
    NotDecaying { b1: f64, b_n1: f64 },
    #[error("damping ratio {zeta} is not underdamped; decrement method requires 0 < zeta < 1")]
    Overdamped { zeta: f64 },
}

impl OscillationRecord {
    pub fn validate(&self) -> Result<(), DecayError> {
        if self.n_cycles < 1 {
            return Err(DecayError::NoCycles);
        }
        for (field, value) in [
            ("b_n1", self.b_n1),
            ("delta_t", self.delta_t),
            ("k_stiffness", self.k_stiffness),
        ] {
            if !(value > 0.0) {
                return Err(DecayError::NotPositive { field, value });
            }
        }
        if self.b1 <= self.b_n1 {
            return Err(DecayError::NotDecaying {
                b1: self.b1,
                b_n1: self.b_n1,
            });
        }
        Ok(())
    }
}

/// Derives decrement, damping ratio, frequencies and damping constants
/// from a decay row:
/// P = dt/n, delta = ln(b1/b_n1)/n, omega_d = 2*pi/P,
/// omega_n = omega_d / sqrt(1 - zeta^2), cc = 2k/omega_n, c = zeta*cc.
pub fn analyze_decay(
    rec: &OscillationRecord,
    convention: DampingConvention,
) -> Result<OscillationAnalysis, DecayError> {
    rec.validate()?;
    let n = rec.n_cycles as f64;
    let period = rec.delta_t / n;
    let delta = math::log(rec.b1 / rec.b_n1) / n;
    let zeta = match convention {
        DampingConvention::Campaign => delta / (4.0 * math::PI),
        DampingConvention::Textbook => {
            delta / math::sqrt(4.0 * math::PI * math::PI + delta * delta)
        }
    };
    if zeta >= 1.0 {
        return Err(DecayError::Overdamped { zeta });
    }
    let omega_d = math::TAU / period;
    let omega_n = omega_d / math::sqrt(1.0 - zeta * zeta);
    let cc_critical = 2.0 * rec.k_stiffness / omega_n;
    let c_damping = zeta * cc_critical;
    Ok(OscillationAnalysis {
        delta,
        zeta,
        omega_d,
        omega_n,
        c_damping,
        cc_critical,
        period,
    })
}

/// Stability verdict for the characteristic equation m*s^2 + c*s + k = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderRoots {
    pub roots: [Complex; 2],
    /// True iff both roots have strictly negative real part.
    pub stable: bool,
}

/// Roots of m*s^2 + c*s + k = 0 by the quadratic formula, with the
/// stability verdict. Marginal roots on the imaginary axis are not stable.
pub fn second_order_roots(m: f64, c: f64, k: f64) -> SecondOrderRoots {
    assert!(m != 0.0, "leading coefficient must be nonzero");
    let r = quadratic_roots(m, c, k);
    let roots = [r[0], r[1]];
    let stable = roots.iter().all(|z| z.re < 0.0);
    SecondOrderRoots { roots, stable }
}
