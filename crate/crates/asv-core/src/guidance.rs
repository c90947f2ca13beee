//! Waypoint guidance and thrust distribution: line-of-sight heading
//! references, per-thruster allocation into net body force/moment, the
//! differential split of speed + heading commands, and the PWM mapping
//! for the motor controller.

use crate::math;
use crate::vessel::{ForceMoment, Pose, VesselParams};

/// A mission target with its arrival radius.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Waypoint {
    /// Target north position, m.
    pub x: f64,
    /// Target east position, m.
    pub y: f64,
    /// Capture radius, m.
    pub capture_radius: f64,
}

impl Waypoint {
    pub fn new(x: f64, y: f64, capture_radius: f64) -> Self {
        Self {
            x,
            y,
            capture_radius,
        }
    }

    pub fn distance_to(&self, pose: &Pose) -> f64 {
        math::hypot(self.x - pose.x, self.y - pose.y)
    }
}

/// Yaw-moment form used when assembling the thrust vector. The verbatim
/// form N = X*d1 + Y*d2 matches the published allocation equations; the
/// conventional form N = Y*d1 - X*d2 is the physically usual moment of a
/// force at arms (d1, d2) and is what closed-loop missions run with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MomentConvention {
    #[default]
    PaperVerbatim,
    Conventional,
}

/// Thruster pair command: thrusts in newtons plus their PWM encoding.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThrusterCommand {
    pub t_port: f64,
    pub t_star: f64,
    pub pwm_port: u16,
    pub pwm_star: u16,
}

impl ThrusterCommand {
    pub fn from_thrusts(t_port: f64, t_star: f64, t_max: f64) -> Self {
        Self {
            t_port,
            t_star,
            pwm_port: quantize_pwm(thrust_to_pwm(t_port, t_max)),
            pwm_star: quantize_pwm(thrust_to_pwm(t_star, t_max)),
        }
    }
}

/// Line-of-sight bearing from the vehicle to the waypoint, wrapped to
/// (-pi, pi].
pub fn los_heading(pose: &Pose, wp: &Waypoint) -> f64 {
    math::wrap_angle(math::atan2(wp.y - pose.y, wp.x - pose.x))
}

/// Net body force/moment from the port/starboard thrusts:
/// X = Tp cos(alpha_p) + Ts cos(alpha_s), Y = Tp sin(alpha_p) - Ts sin(alpha_s),
/// N = X*d1 + Y*d2 (verbatim form).
pub fn allocate_thrust(p: &VesselParams, t_port: f64, t_star: f64) -> ForceMoment {
    allocate_thrust_with(p, t_port, t_star, MomentConvention::PaperVerbatim)
}

/// Thrust allocation with a selectable yaw-moment convention.
pub fn allocate_thrust_with(
    p: &VesselParams,
    t_port: f64,
    t_star: f64,
    convention: MomentConvention,
) -> ForceMoment {
    let x = t_port * math::cos(p.alpha_p) + t_star * math::cos(p.alpha_s);
    let y = t_port * math::sin(p.alpha_p) - t_star * math::sin(p.alpha_s);
    let n = match convention {
        MomentConvention::PaperVerbatim => x * p.d1 + y * p.d2,
        MomentConvention::Conventional => y * p.d1 - x * p.d2,
    };
    ForceMoment::new(x, y, n)
}

/// Splits a forward command and a heading command into the thruster pair
/// with symmetric saturation: port = clamp(speed + heading),
/// starboard = clamp(speed - heading).
pub fn differential_from_command(u_heading: f64, u_speed: f64, t_max: f64) -> (f64, f64) {
    debug_assert!(t_max > 0.0);
    (
        (u_speed + u_heading).clamp(-t_max, t_max),
        (u_speed - u_heading).clamp(-t_max, t_max),
    )
}

/// Linear map from thrust in [-t_max, +t_max] to pulse width in
/// [1000, 2000] microseconds; zero thrust is 1500 us and commands outside
/// the range clamp to the endpoints.
pub fn thrust_to_pwm(t: f64, t_max: f64) -> f64 {
    assert!(t_max > 0.0, "t_max must be positive");
    1500.0 + 500.0 * (t / t_max).clamp(-1.0, 1.0)
}

/// Inverse of `thrust_to_pwm` on [1000, 2000] us.
pub fn pwm_to_thrust(pwm: f64, t_max: f64) -> f64 {
    assert!(t_max > 0.0, "t_max must be positive");
    (pwm.clamp(1000.0, 2000.0) - 1500.0) / 500.0 * t_max
}

fn quantize_pwm(pwm: f64) -> u16 {
    math::round(pwm.clamp(1000.0, 2000.0)) as u16
}
