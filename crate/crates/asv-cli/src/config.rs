//! Versioned JSON configuration: vessel parameters, simulation setup,
//! controller gains, guidance settings, sensor model and artifact paths.
//! Unknown keys are rejected and every component invariant is validated
//! at load time with a field-level message.

use std::path::{Path, PathBuf};

use asv_core::autopilot::PidGains;
use asv_core::guidance::MomentConvention;
use asv_core::sensing::SensorModel;
use asv_core::sim::SimConfig;
use asv_core::vessel::VesselParams;
use serde::Deserialize;

use crate::CliError;

pub const CONFIG_VERSION: u32 = 1;
pub const CONFIG_ENV_VAR: &str = "ASV_SIM_CONFIG";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    pub vessel: VesselParams,
    pub sim: SimConfig,
    pub pid: PidGains,
    pub guidance: GuidanceConfig,
    pub sensors: SensorsConfig,
    pub paths: PathsConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuidanceConfig {
    /// Forward thrust command per thruster, N.
    pub cruise_thrust: f64,
    /// Symmetric per-thruster saturation, N; also the PWM full-scale.
    pub thrust_limit: f64,
    /// Saturation of the heading controller output, N of differential
    /// thrust.
    pub heading_output_limit: f64,
    #[serde(default)]
    pub moment_convention: MomentConvention,
    /// Capture radius applied to mission waypoints that do not carry
    /// their own, m.
    #[serde(default = "default_capture_radius")]
    pub default_capture_radius: f64,
}

fn default_capture_radius() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorsConfig {
    pub noise_ph: f64,
    pub noise_ec: f64,
    pub noise_temp: f64,
    pub ec_temp_coeff: f64,
    pub t_ref: f64,
    /// Seconds between water samples along the trajectory.
    pub sample_period_s: f64,
}

impl SensorsConfig {
    pub fn model(&self) -> SensorModel {
        SensorModel {
            noise_ph: self.noise_ph,
            noise_ec: self.noise_ec,
            noise_temp: self.noise_temp,
            ec_temp_coeff: self.ec_temp_coeff,
            t_ref: self.t_ref,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsConfig {
    /// Water-property grid CSV (x,y,ph,ec_ref,temp).
    pub field_csv: PathBuf,
    /// Waypoint list JSON.
    pub mission_json: PathBuf,
    /// Output directory for generated artifacts.
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Config {
    /// Parses and validates a configuration document. Relative paths are
    /// resolved against the config file's directory, and the referenced
    /// files must exist.
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Input(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut config: Config = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
        if config.version != CONFIG_VERSION {
            return Err(CliError::Input(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                config.version
            )));
        }
        let base = path.parent().unwrap_or(Path::new("."));
        config.paths.field_csv = resolve(base, &config.paths.field_csv);
        config.paths.mission_json = resolve(base, &config.paths.mission_json);
        config.paths.out_dir = resolve(base, &config.paths.out_dir);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.vessel
            .validate()
            .map_err(|e| CliError::Input(e.to_string()))?;
        self.sim
            .validate()
            .map_err(|e| CliError::Input(e.to_string()))?;
        self.pid
            .validate()
            .map_err(|e| CliError::Input(e.to_string()))?;
        self.sensors
            .model()
            .validate()
            .map_err(|e| CliError::Input(e.to_string()))?;
        for (field, value) in [
            ("guidance.cruise_thrust", self.guidance.cruise_thrust),
            ("guidance.thrust_limit", self.guidance.thrust_limit),
            (
                "guidance.heading_output_limit",
                self.guidance.heading_output_limit,
            ),
            (
                "guidance.default_capture_radius",
                self.guidance.default_capture_radius,
            ),
        ] {
            if !value.is_finite() {
                return Err(CliError::Input(format!("{field} must be finite")));
            }
        }
        if self.guidance.thrust_limit <= 0.0 {
            return Err(CliError::Input(format!(
                "guidance.thrust_limit must be > 0, got {}",
                self.guidance.thrust_limit
            )));
        }
        if self.guidance.heading_output_limit <= 0.0 {
            return Err(CliError::Input(format!(
                "guidance.heading_output_limit must be > 0, got {}",
                self.guidance.heading_output_limit
            )));
        }
        if self.guidance.default_capture_radius <= 0.0 {
            return Err(CliError::Input(format!(
                "guidance.default_capture_radius must be > 0, got {}",
                self.guidance.default_capture_radius
            )));
        }
        if !(self.sensors.sample_period_s > 0.0) {
            return Err(CliError::Input(format!(
                "sensors.sample_period_s must be > 0, got {}",
                self.sensors.sample_period_s
            )));
        }
        for (name, p) in [
            ("paths.field_csv", &self.paths.field_csv),
            ("paths.mission_json", &self.paths.mission_json),
        ] {
            if !p.exists() {
                return Err(CliError::Input(format!(
                    "{name} does not exist: {}",
                    p.display()
                )));
            }
        }
        Ok(())
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
