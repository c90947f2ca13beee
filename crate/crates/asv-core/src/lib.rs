//! Core models for a small twin-hull autonomous surface vehicle: 3-DOF
//! rigid-body dynamics, fixed-step mission simulation, SWATH free-decay
//! analysis, Nomoto heading autopilot with PID stabilization, waypoint
//! guidance with differential thrust, simulated water-quality sensing with
//! a binary telemetry link, and water-quality-index classification.
//!
//! The crate is `no_std`-compatible (requires `alloc`); all IO, file
//! formats and the command-line front end live in the companion `asv-cli`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod autopilot;
pub mod complex;
pub mod guidance;
pub mod math;
pub mod sensing;
pub mod sim;
pub mod swath;
pub mod telemetry;
pub mod vessel;
pub mod wqi;

pub use autopilot::{HeadingPid, PidGains, StepResponse, TransferFunction};
pub use complex::Complex;
pub use guidance::{MomentConvention, ThrusterCommand, Waypoint};
pub use sensing::{SensorModel, WaterField, WaterSample};
pub use sim::{DisturbanceConfig, MissionController, MissionOutcome, SimConfig, Trajectory};
pub use swath::{OscillationAnalysis, OscillationRecord};
pub use vessel::{BodyVelocity, ForceMoment, Pose, VehicleState, VesselParams};
pub use wqi::{WqiClassTable, WqiVerdict};
