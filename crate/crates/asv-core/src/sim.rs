//! Fixed-step mission simulator: RK4 integration of the vehicle dynamics,
//! seeded environmental disturbances, and the closed guidance/autopilot
//! loop that walks a waypoint list with differential thrust.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::autopilot::HeadingPid;
use crate::guidance::{
    allocate_thrust_with, differential_from_command, los_heading, MomentConvention, Waypoint,
};
use crate::math;
use crate::vessel::{dynamics_derivative, BodyVelocity, ForceMoment, Pose, VehicleState, VesselParams};

/// Sway-force / yaw-moment disturbance: a zero-mean sinusoid plus seeded
/// uniform noise on both channels.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct DisturbanceConfig {
    /// Sway-force sinusoid amplitude, N.
    pub sway_force: f64,
    /// Yaw-moment sinusoid amplitude, N·m.
    pub yaw_moment: f64,
    /// Shared sinusoid frequency, Hz.
    pub frequency_hz: f64,
    /// Uniform noise amplitude as a fraction of each sinusoid amplitude.
    pub noise_fraction: f64,
    /// Separate seed for the noise stream; falls back to the simulation
    /// seed when absent.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimConfigError {
    #[error("sim.dt must be > 0, got {0}")]
    BadStep(f64),
    #[error("sim.duration must be >= dt, got {duration} with dt {dt}")]
    BadDuration { duration: f64, dt: f64 },
    #[error("sim.disturbance.{field} must be >= 0 and finite, got {value}")]
    BadDisturbance { field: &'static str, value: f64 },
}

/// Integration setup shared by every mission run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SimConfig {
    /// Integration step, s.
    pub dt: f64,
    /// Total simulated time, s.
    pub duration: f64,
    pub disturbance: Option<DisturbanceConfig>,
    /// RNG seed; identical configs and inputs reproduce bit-identical
    /// trajectories.
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimConfigError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SimConfigError::BadStep(self.dt));
        }
        if !(self.duration >= self.dt) || !self.duration.is_finite() {
            return Err(SimConfigError::BadDuration {
                duration: self.duration,
                dt: self.dt,
            });
        }
        if let Some(d) = &self.disturbance {
            for (field, value) in [
                ("sway_force", d.sway_force),
                ("yaw_moment", d.yaw_moment),
                ("frequency_hz", d.frequency_hz),
                ("noise_fraction", d.noise_fraction),
            ] {
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(SimConfigError::BadDisturbance { field, value });
                }
            }
        }
        Ok(())
    }
}

/// One integration sample: time, state, and the total force/moment that
/// drove the step (thrust plus disturbance).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectorySample {
    pub t: f64,
    pub state: VehicleState,
    pub tr: ForceMoment,
}

/// Time-ordered mission history, spaced by the integration step.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last_state(&self) -> Option<&VehicleState> {
        self.samples.last().map(|s| &s.state)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("state became non-finite at t = {t} s")]
    NonFiniteState { t: f64 },
    #[error("mission needs at least one waypoint")]
    NoWaypoints,
}

/// Mission termination report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissionOutcome {
    /// Every waypoint was captured; carries the number of completed
    /// integration steps.
    Completed { steps: usize },
    /// Duration elapsed with this many waypoints still pending.
    TimedOut { waypoints_remaining: usize },
}

/// Closed-loop mission result.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionResult {
    pub trajectory: Trajectory,
    pub outcome: MissionOutcome,
}

/// Heading + thrust policy for `run_mission`. With `pid = None` the run
/// is open loop: both thrusters hold the cruise setting and heading is
/// uncontrolled.
#[derive(Debug, Clone)]
pub struct MissionController {
    pub pid: Option<HeadingPid>,
    /// Forward thrust command per thruster, N.
    pub cruise_thrust: f64,
    /// Symmetric per-thruster saturation, N.
    pub thrust_limit: f64,
    /// Yaw-moment form used when assembling the net thrust load.
    pub convention: MomentConvention,
}

impl MissionController {
    fn command(&mut self, heading_ref: f64, state: &VehicleState, dt: f64) -> (f64, f64) {
        let u_heading = match &mut self.pid {
            Some(pid) => pid.step(heading_ref, state.pose.psi, dt),
            None => 0.0,
        };
        differential_from_command(u_heading, self.cruise_thrust, self.thrust_limit)
    }
}

/// One classic RK4 step of the vehicle dynamics under a force/moment held
/// constant over the step; the heading is re-normalized afterwards.
/// A non-finite intermediate or final state aborts the step.
pub fn rk4_step(
    p: &VesselParams,
    state: &VehicleState,
    tr: &ForceMoment,
    dt: f64,
) -> Result<VehicleState, SimError> {
    assert!(dt > 0.0, "dt must be positive");

    let pack = |s: &VehicleState| {
        [
            s.pose.x, s.pose.y, s.pose.psi, s.vel.u, s.vel.v, s.vel.r,
        ]
    };
    let unpack = |x: &[f64; 6]| VehicleState {
        pose: Pose {
            x: x[0],
            y: x[1],
            psi: x[2],
        },
        vel: BodyVelocity {
            u: x[3],
            v: x[4],
            r: x[5],
        },
    };

    let x0 = pack(state);
    let f = |x: &[f64; 6]| dynamics_derivative(p, &unpack(x), tr);

    let k1 = f(&x0);
    let mut xa = [0.0; 6];
    for i in 0..6 {
        xa[i] = x0[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(&xa);
    for i in 0..6 {
        xa[i] = x0[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(&xa);
    for i in 0..6 {
        xa[i] = x0[i] + dt * k3[i];
    }
    let k4 = f(&xa);

    let mut x1 = [0.0; 6];
    for i in 0..6 {
        x1[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if x1.iter().any(|v| !v.is_finite()) {
        return Err(SimError::NonFiniteState { t: f64::NAN });
    }
    let mut next = unpack(&x1);
    next.pose.psi = math::wrap_angle(next.pose.psi);
    Ok(next)
}

struct Disturber {
    cfg: DisturbanceConfig,
    rng: ChaCha8Rng,
}

impl Disturber {
    fn new(cfg: DisturbanceConfig, fallback_seed: u64) -> Self {
        Self {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(fallback_seed)),
        }
    }

    fn at(&mut self, t: f64) -> ForceMoment {
        let phase = math::sin(math::TAU * self.cfg.frequency_hz * t);
        let sway = self.cfg.sway_force
            * (phase + math::uniform_symmetric(&mut self.rng, self.cfg.noise_fraction));
        let yaw = self.cfg.yaw_moment
            * (phase + math::uniform_symmetric(&mut self.rng, self.cfg.noise_fraction));
        ForceMoment::new(0.0, sway, yaw)
    }
}

/// Runs the closed guidance/autopilot loop from `start` over the waypoint
/// list: LOS bearing -> PID differential thrust -> allocation -> RK4.
/// The run ends when the last waypoint is captured or the configured
/// duration elapses, whichever comes first.
pub fn run_mission(
    p: &VesselParams,
    cfg: &SimConfig,
    controller: &mut MissionController,
    waypoints: &[Waypoint],
    start: VehicleState,
) -> Result<MissionResult, SimError> {
    if waypoints.is_empty() {
        return Err(SimError::NoWaypoints);
    }

    let mut disturber = cfg
        .disturbance
        .map(|d| Disturber::new(d, cfg.seed));
    let steps = math::floor(cfg.duration / cfg.dt + 0.5) as usize;
    let mut trajectory = Trajectory {
        samples: Vec::with_capacity(steps + 1),
    };

    let mut state = start;
    let mut next_wp = 0usize;

    for step in 0..steps {
        let t = step as f64 * cfg.dt;

        // Capture check (possibly several waypoints in one pass when they
        // are stacked within the same radius).
        while next_wp < waypoints.len()
            && waypoints[next_wp].distance_to(&state.pose) <= waypoints[next_wp].capture_radius
        {
            next_wp += 1;
        }
        if next_wp >= waypoints.len() {
            // Record the terminal state with zero applied load.
            trajectory.samples.push(TrajectorySample {
                t,
                state,
                tr: ForceMoment::zero(),
            });
            return Ok(MissionResult {
                trajectory,
                outcome: MissionOutcome::Completed { steps: step },
            });
        }

        let heading_ref = los_heading(&state.pose, &waypoints[next_wp]);
        let (t_port, t_star) = controller.command(heading_ref, &state, cfg.dt);
        let mut tr = allocate_thrust_with(p, t_port, t_star, controller.convention);
        if let Some(d) = &mut disturber {
            tr = tr + d.at(t);
        }

        trajectory.samples.push(TrajectorySample { t, state, tr });
        state = rk4_step(p, &state, &tr, cfg.dt).map_err(|_| SimError::NonFiniteState { t })?;
    }

    trajectory.samples.push(TrajectorySample {
        t: steps as f64 * cfg.dt,
        state,
        tr: ForceMoment::zero(),
    });
    Ok(MissionResult {
        trajectory,
        outcome: MissionOutcome::TimedOut {
            waypoints_remaining: waypoints.len() - next_wp,
        },
    })
}
