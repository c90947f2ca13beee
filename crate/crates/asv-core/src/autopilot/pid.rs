//! Discrete heading PID with angle-wrapped error, clamping anti-windup,
//! filtered derivative-on-measurement and symmetric output saturation.

use crate::math;

/// Controller gains shared by the loop-shaping analysis and the discrete
/// controller.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Derivative filter time constant, s; 0 disables the filter.
    pub tf_derivative: f64,
}

impl PidGains {
    /// Shipped defaults, obtained by pole placement on the identified
    /// steering plant targeting closed-loop poles near {-1.5 +- 1.0i, -4}.
    pub fn default_for_vehicle() -> Self {
        Self {
            kp: 1.0136,
            ki: 0.9970,
            kd: 0.0738,
            tf_derivative: 0.02,
        }
    }

    pub fn validate(&self) -> Result<(), PidError> {
        for (field, value) in [
            ("kp", self.kp),
            ("ki", self.ki),
            ("kd", self.kd),
            ("tf_derivative", self.tf_derivative),
        ] {
            if !value.is_finite() {
                return Err(PidError::NotFinite { field });
            }
        }
        if self.tf_derivative < 0.0 {
            return Err(PidError::NegativeFilter {
                value: self.tf_derivative,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PidError {
    #[error("pid.{field} must be finite")]
    NotFinite { field: &'static str },
    #[error("pid.tf_derivative must be >= 0, got {value}")]
    NegativeFilter { value: f64 },
}

/// One controller instance per control loop; holds the integral and the
/// filtered derivative state.
#[derive(Debug, Clone)]
pub struct HeadingPid {
    gains: PidGains,
    /// Symmetric output saturation, in actuator units.
    output_limit: f64,
    integral: f64,
    prev_measurement: Option<f64>,
    deriv_filtered: f64,
}

impl HeadingPid {
    pub fn new(gains: PidGains, output_limit: f64) -> Self {
        assert!(output_limit > 0.0, "output limit must be positive");
        Self {
            gains,
            output_limit,
            integral: 0.0,
            prev_measurement: None,
            deriv_filtered: 0.0,
        }
    }

    pub fn reset(&mut self) {
        self.integral = 0.0;
        self.prev_measurement = None;
        self.deriv_filtered = 0.0;
    }

    pub fn gains(&self) -> &PidGains {
        &self.gains
    }

    pub fn output_limit(&self) -> f64 {
        self.output_limit
    }

    /// Advances the controller one sample. The heading error is wrapped
    /// to (-pi, pi] so the vehicle always turns the short way; the
    /// integral is clamped so its contribution alone cannot exceed the
    /// saturation; the derivative acts on the measurement through a
    /// first-order filter, which avoids setpoint kick.
    pub fn step(&mut self, reference: f64, measured: f64, dt: f64) -> f64 {
        assert!(dt > 0.0, "dt must be positive");
        let error = math::wrap_angle(reference - measured);

        self.integral += self.gains.ki * error * dt;
        self.integral = self.integral.clamp(-self.output_limit, self.output_limit);

        let raw_rate = match self.prev_measurement {
            Some(prev) => math::wrap_angle(measured - prev) / dt,
            None => 0.0,
        };
        self.prev_measurement = Some(measured);
        let tf = self.gains.tf_derivative;
        if tf > 0.0 {
            self.deriv_filtered += (raw_rate - self.deriv_filtered) * dt / (tf + dt);
        } else {
            self.deriv_filtered = raw_rate;
        }

        let command = self.gains.kp * error + self.integral - self.gains.kd * self.deriv_filtered;
        command.clamp(-self.output_limit, self.output_limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    fn gains(kp: f64, ki: f64, kd: f64, tf: f64) -> PidGains {
        PidGains {
            kp,
            ki,
            kd,
            tf_derivative: tf,
        }
    }

    #[test]
    fn zero_error_zero_history_zero_command() {
        let mut pid = HeadingPid::new(gains(2.0, 0.5, 0.1, 0.05), 10.0);
        assert_eq!(pid.step(0.7, 0.7, 0.1), 0.0);
    }

    #[test]
    fn pure_proportional_on_constant_error() {
        let mut pid = HeadingPid::new(gains(2.0, 0.0, 0.0, 0.0), 100.0);
        for _ in 0..50 {
            let cmd = pid.step(0.5, 0.0, 0.1);
            assert!((cmd - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn error_wraps_the_short_way() {
        // Reference +179 deg, measured -179 deg: error is -2 deg.
        let mut pid = HeadingPid::new(gains(1.0, 0.0, 0.0, 0.0), 100.0);
        let reference = 179.0f64.to_radians();
        let measured = -179.0f64.to_radians();
        let cmd = pid.step(reference, measured, 0.1);
        assert!((cmd - (-2.0f64).to_radians()).abs() < 1e-9, "{cmd}");
    }

    #[test]
    fn wrapped_error_never_exceeds_pi() {
        use rand_chacha::ChaCha8Rng;
        use rand_core::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2000 {
            let reference = math::uniform_symmetric(&mut rng, 20.0);
            let measured = math::uniform_symmetric(&mut rng, 20.0);
            let e = math::wrap_angle(reference - measured);
            assert!(e.abs() <= PI);
        }
    }

    #[test]
    fn output_saturates_and_integral_does_not_wind_up() {
        let limit = 2.0;
        let mut pid = HeadingPid::new(gains(10.0, 5.0, 0.0, 0.0), limit);
        // Large persistent error saturates the output.
        for _ in 0..200 {
            let cmd = pid.step(3.0, 0.0, 0.1);
            assert!(cmd.abs() <= limit);
        }
        // After the error flips, the clamped integral lets the command
        // change sign within a few samples instead of unwinding forever.
        let mut flipped = None;
        for i in 0..10 {
            let cmd = pid.step(-3.0, 0.0, 0.1);
            assert!(cmd.abs() <= limit);
            if cmd < 0.0 {
                flipped = Some(i);
                break;
            }
        }
        assert!(flipped.is_some(), "command never flipped sign");
    }

    #[test]
    fn derivative_acts_on_measurement_without_setpoint_kick() {
        let mut with_kick_check = HeadingPid::new(gains(0.0, 0.0, 1.0, 0.0), 100.0);
        // Constant measurement, stepped reference: derivative term stays 0.
        let _ = with_kick_check.step(0.0, 0.2, 0.1);
        let cmd = with_kick_check.step(1.0, 0.2, 0.1);
        assert_eq!(cmd, 0.0);

        // Moving measurement produces a damping command opposing motion.
        let mut pid = HeadingPid::new(gains(0.0, 0.0, 1.0, 0.0), 100.0);
        let _ = pid.step(0.0, 0.0, 0.1);
        let cmd = pid.step(0.0, 0.1, 0.1);
        assert!(cmd < 0.0, "{cmd}");
    }

    #[test]
    fn derivative_filter_smooths_rate_estimate() {
        let raw = {
            let mut pid = HeadingPid::new(gains(0.0, 0.0, 1.0, 0.0), 100.0);
            let _ = pid.step(0.0, 0.0, 0.1);
            pid.step(0.0, 0.1, 0.1).abs()
        };
        let filtered = {
            let mut pid = HeadingPid::new(gains(0.0, 0.0, 1.0, 0.5), 100.0);
            let _ = pid.step(0.0, 0.0, 0.1);
            pid.step(0.0, 0.1, 0.1).abs()
        };
        assert!(filtered < raw, "{filtered} vs {raw}");
    }

    #[test]
    fn validate_rejects_bad_gains() {
        assert!(gains(1.0, 0.1, 0.05, 0.02).validate().is_ok());
        assert!(matches!(
            gains(f64::NAN, 0.0, 0.0, 0.0).validate(),
            Err(PidError::NotFinite { field: "kp" })
        ));
        assert!(matches!(
            gains(1.0, 0.0, 0.0, -0.1).validate(),
            Err(PidError::NegativeFilter { .. })
        ));
    }
}
