//! Simulated water-property sensing: a piecewise-bilinear spatial field,
//! the pH/EC/temperature sensor model with its EC temperature dependence,
//! and reference-temperature compensation.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::math;
use crate::sim::Trajectory;
use crate::vessel::VehicleState;

/// One decoded (or to-be-encoded) sensor reading.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WaterSample {
    /// Milliseconds since mission start.
    pub t_ms: u32,
    /// Position north, m.
    pub x: f64,
    /// Position east, m.
    pub y: f64,
    /// Compass heading, rad in (-pi, pi]; degrees from north on the wire
    /// and in the shore log.
    pub heading: f64,
    /// pH units, clamped to [0, 14].
    pub ph: f64,
    /// Electrical conductivity, mS/cm, non-negative.
    pub ec: f64,
    /// Water temperature, degrees C, clamped to [-5, 60].
    pub temp: f64,
}

impl WaterSample {
    /// Clamps the measured channels into their physical ranges.
    pub fn clamped(mut self) -> Self {
        self.ph = self.ph.clamp(0.0, 14.0);
        self.ec = self.ec.max(0.0);
        self.temp = self.temp.clamp(-5.0, 60.0);
        self
    }
}

/// Local water properties at one point of the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub ph: f64,
    /// EC referenced to the sensor model's reference temperature, mS/cm.
    pub ec_ref: f64,
    /// Water temperature, degrees C.
    pub temp: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("field grid needs at least one node")]
    Empty,
    #[error("field grid axes must be strictly increasing")]
    NotMonotonic,
    #[error("field grid is ragged: expected {expected} values, got {got}")]
    Ragged { expected: usize, got: usize },
}

/// Regular-lattice water-property field with bilinear interpolation
/// inside the hull of grid nodes and nearest-cell clamping outside.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterField {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // Row-major over (x index, y index).
    ph: Vec<f64>,
    ec_ref: Vec<f64>,
    temp: Vec<f64>,
}

impl WaterField {
    /// Builds a field from strictly increasing axes and row-major values
    /// (`values[ix * ys.len() + iy]`).
    pub fn from_grid(
        xs: Vec<f64>,
        ys: Vec<f64>,
        ph: Vec<f64>,
        ec_ref: Vec<f64>,
        temp: Vec<f64>,
    ) -> Result<Self, FieldError> {
        if xs.is_empty() || ys.is_empty() {
            return Err(FieldError::Empty);
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) || ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FieldError::NotMonotonic);
        }
        let expected = xs.len() * ys.len();
        for values in [&ph, &ec_ref, &temp] {
            if values.len() != expected {
                return Err(FieldError::Ragged {
                    expected,
                    got: values.len(),
                });
            }
        }
        Ok(Self {
            xs,
            ys,
            ph,
            ec_ref,
            temp,
        })
    }

    /// A spatially constant field.
    pub fn uniform(ph: f64, ec_ref: f64, temp: f64) -> Self {
        Self {
            xs: alloc::vec![0.0],
            ys: alloc::vec![0.0],
            ph: alloc::vec![ph],
            ec_ref: alloc::vec![ec_ref],
            temp: alloc::vec![temp],
        }
    }

    fn bracket(axis: &[f64], q: f64) -> (usize, f64) {
        if axis.len() == 1 || q <= axis[0] {
            return (0, 0.0);
        }
        let last = axis.len() - 1;
        if q >= axis[last] {
            return (last - 1, 1.0);
        }
        let mut i = 0;
        while axis[i + 1] < q {
            i += 1;
        }
        (i, (q - axis[i]) / (axis[i + 1] - axis[i]))
    }

    fn channel_at(&self, values: &[f64], x: f64, y: f64) -> f64 {
        let nx = self.xs.len();
        let ny = self.ys.len();
        if nx == 1 && ny == 1 {
            return values[0];
        }
        let (ix, fx) = Self::bracket(&self.xs, x);
        let (iy, fy) = Self::bracket(&self.ys, y);
        let at = |i: usize, j: usize| values[i * ny + j];
        if nx == 1 {
            return at(0, iy) * (1.0 - fy) + at(0, iy + 1) * fy;
        }
        if ny == 1 {
            return at(ix, 0) * (1.0 - fx) + at(ix + 1, 0) * fx;
        }
        let v00 = at(ix, iy);
        let v01 = at(ix, iy + 1);
        let v10 = at(ix + 1, iy);
        let v11 = at(ix + 1, iy + 1);
        v00 * (1.0 - fx) * (1.0 - fy)
            + v10 * fx * (1.0 - fy)
            + v01 * (1.0 - fx) * fy
            + v11 * fx * fy
    }

    pub fn sample(&self, x: f64, y: f64) -> FieldPoint {
        FieldPoint {
            ph: self.channel_at(&self.ph, x, y),
            ec_ref: self.channel_at(&self.ec_ref, x, y),
            temp: self.channel_at(&self.temp, x, y),
        }
    }
}

/// Per-channel noise and the EC temperature response of the sensor suite.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SensorModel {
    /// Gaussian noise standard deviations.
    pub noise_ph: f64,
    pub noise_ec: f64,
    pub noise_temp: f64,
    /// EC temperature coefficient, fraction per degree C. The field
    /// measurements put the default at 0.025 (2-3% per degree C band).
    pub ec_temp_coeff: f64,
    /// Reference temperature the field's EC values are quoted at, deg C.
    pub t_ref: f64,
}

impl Default for SensorModel {
    fn default() -> Self {
        Self {
            noise_ph: 0.0,
            noise_ec: 0.0,
            noise_temp: 0.0,
            ec_temp_coeff: 0.025,
            t_ref: 25.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SensorError {
    #[error("sensors.{field} must be >= 0, got {value}")]
    NegativeNoise { field: &'static str, value: f64 },
    #[error("sensors.ec_temp_coeff must be in (0, 0.1], got {value}")]
    BadCoefficient { value: f64 },
    #[error("sensors.t_ref must be finite")]
    BadReference,
    #[error("temperature compensation denominator 1 + kappa*(T - t_ref) = {value} is not positive")]
    NonPositiveDenominator { value: f64 },
}

impl SensorModel {
    pub fn validate(&self) -> Result<(), SensorError> {
        for (field, value) in [
            ("noise_ph", self.noise_ph),
            ("noise_ec", self.noise_ec),
            ("noise_temp", self.noise_temp),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(SensorError::NegativeNoise { field, value });
            }
        }
        if !(self.ec_temp_coeff > 0.0 && self.ec_temp_coeff <= 0.1) {
            return Err(SensorError::BadCoefficient {
                value: self.ec_temp_coeff,
            });
        }
        if !self.t_ref.is_finite() {
            return Err(SensorError::BadReference);
        }
        Ok(())
    }
}

/// Reads the field at the vehicle position, applies the EC temperature
/// scaling EC(T) = EC_ref * (1 + kappa*(T - t_ref)), adds seeded Gaussian
/// noise and clamps into the sample invariants.
pub fn sample_sensors(
    model: &SensorModel,
    state: &VehicleState,
    field: &WaterField,
    t_ms: u32,
    rng: &mut ChaCha8Rng,
) -> WaterSample {
    let point = field.sample(state.pose.x, state.pose.y);
    let ec_at_temp = point.ec_ref * (1.0 + model.ec_temp_coeff * (point.temp - model.t_ref));
    WaterSample {
        t_ms,
        x: state.pose.x,
        y: state.pose.y,
        heading: state.pose.psi,
        ph: point.ph + model.noise_ph * math::gaussian(rng),
        ec: ec_at_temp + model.noise_ec * math::gaussian(rng),
        temp: point.temp + model.noise_temp * math::gaussian(rng),
    }
    .clamped()
}

/// Normalizes a conductivity reading taken at `temp` back to the
/// reference temperature: ec / (1 + kappa*(temp - t_ref)).
pub fn compensate_ec(ec_t: f64, temp: f64, kappa: f64, t_ref: f64) -> Result<f64, SensorError> {
    let denom = 1.0 + kappa * (temp - t_ref);
    if denom <= 0.0 {
        return Err(SensorError::NonPositiveDenominator { value: denom });
    }
    Ok(ec_t / denom)
}

/// Walks a trajectory and takes one sensor reading every `period` seconds
/// of mission time. The RNG stream is derived from the seed alone, so a
/// given (trajectory, seed) pair always yields the same samples.
pub fn collect_water_samples(
    trajectory: &Trajectory,
    field: &WaterField,
    model: &SensorModel,
    period: f64,
    seed: u64,
) -> Vec<WaterSample> {
    assert!(period > 0.0, "sampling period must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EAF00D);
    let mut samples = Vec::new();
    let mut next_t = 0.0;
    for point in &trajectory.samples {
        if point.t + 1e-9 >= next_t {
            let t_ms = math::round(point.t * 1000.0) as u32;
            samples.push(sample_sensors(model, &point.state, field, t_ms, &mut rng));
            next_t += period;
        }
    }
    samples
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vessel::{BodyVelocity, Pose};

    fn state_at(x: f64, y: f64) -> VehicleState {
        VehicleState::new(Pose::new(x, y, 0.0), BodyVelocity::zero())
    }

    #[test]
    fn ec_temperature_scaling_matches_linear_model() {
        // kappa = 0.025, EC_ref 11.0 at 21 C, measured at 31 C -> 13.75.
        let model = SensorModel {
            ec_temp_coeff: 0.025,
            t_ref: 21.0,
            ..SensorModel::default()
        };
        let field = WaterField::uniform(7.0, 11.0, 31.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_sensors(&model, &state_at(0.0, 0.0), &field, 0, &mut rng);
        assert!((s.ec - 13.75).abs() < 1e-12, "{}", s.ec);
    }

    #[test]
    fn reference_temperature_reads_reference_ec() {
        let model = SensorModel {
            t_ref: 25.0,
            ..SensorModel::default()
        };
        let field = WaterField::uniform(7.0, 11.0, 25.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_sensors(&model, &state_at(0.0, 0.0), &field, 0, &mut rng);
        assert_eq!(s.ec, 11.0);
    }

    #[test]
    fn noiseless_flat_field_repeats_exactly() {
        let model = SensorModel::default();
        let field = WaterField::uniform(7.2, 10.0, 28.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = sample_sensors(&model, &state_at(4.0, -2.0), &field, 100, &mut rng);
        let b = sample_sensors(&model, &state_at(4.0, -2.0), &field, 100, &mut rng);
        assert_eq!(a, b);
    }

    #[test]
    fn compensation_examples() {
        let c = compensate_ec(13.5, 31.0, 0.025, 21.0).unwrap();
        assert!((c - 10.8).abs() < 1e-12, "{c}");
        let same = compensate_ec(9.0, 21.0, 0.025, 21.0).unwrap();
        assert_eq!(same, 9.0);
        assert!(matches!(
            compensate_ec(9.0, -30.0, 0.025, 21.0),
            Err(SensorError::NonPositiveDenominator { .. })
        ));
    }

    #[test]
    fn compensation_inverts_the_sensor_scaling() {
        let model = SensorModel {
            ec_temp_coeff: 0.022,
            t_ref: 24.0,
            ..SensorModel::default()
        };
        for temp in [5.0, 15.0, 24.0, 33.0, 45.0] {
            let field = WaterField::uniform(7.0, 12.5, temp);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let s = sample_sensors(&model, &state_at(0.0, 0.0), &field, 0, &mut rng);
            let back = compensate_ec(s.ec, temp, model.ec_temp_coeff, model.t_ref).unwrap();
            assert!((back - 12.5).abs() < 1e-9, "T={temp}: {back}");
        }
    }

    #[test]
    fn sample_mean_converges_with_seeded_noise() {
        let model = SensorModel {
            noise_ph: 0.05,
            noise_ec: 0.2,
            noise_temp: 0.1,
            ..SensorModel::default()
        };
        let field = WaterField::uniform(7.0, 11.0, 25.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 4000;
        let mut mean_ph = 0.0;
        let mut mean_ec = 0.0;
        for _ in 0..n {
            let s = sample_sensors(&model, &state_at(0.0, 0.0), &field, 0, &mut rng);
            mean_ph += s.ph;
            mean_ec += s.ec;
        }
        mean_ph /= n as f64;
        mean_ec /= n as f64;
        let bound = 4.0 / math::sqrt(n as f64);
        assert!((mean_ph - 7.0).abs() < bound * 0.05, "{mean_ph}");
        assert!((mean_ec - 11.0).abs() < bound * 0.2, "{mean_ec}");
    }

    #[test]
    fn bilinear_interpolation_and_clamping() {
        let field = WaterField::from_grid(
            alloc::vec![0.0, 10.0],
            alloc::vec![0.0, 10.0],
            alloc::vec![6.0, 7.0, 8.0, 9.0],
            alloc::vec![10.0, 10.0, 10.0, 10.0],
            alloc::vec![20.0, 20.0, 30.0, 30.0],
        )
        .unwrap();
        // Center of the cell: average of the corners.
        let mid = field.sample(5.0, 5.0);
        assert!((mid.ph - 7.5).abs() < 1e-12);
        assert!((mid.temp - 25.0).abs() < 1e-12);
        // Outside the hull: nearest cell's edge value.
        let out = field.sample(-100.0, -100.0);
        assert_eq!(out.ph, 6.0);
        let out = field.sample(100.0, 100.0);
        assert_eq!(out.ph, 9.0);
    }

    #[test]
    fn grid_validation_errors() {
        assert!(matches!(
            WaterField::from_grid(
                alloc::vec![],
                alloc::vec![0.0],
                alloc::vec![],
                alloc::vec![],
                alloc::vec![]
            ),
            Err(FieldError::Empty)
        ));
        assert!(matches!(
            WaterField::from_grid(
                alloc::vec![0.0, 0.0],
                alloc::vec![0.0],
                alloc::vec![7.0, 7.0],
                alloc::vec![1.0, 1.0],
                alloc::vec![20.0, 20.0]
            ),
            Err(FieldError::NotMonotonic)
        ));
        assert!(matches!(
            WaterField::from_grid(
                alloc::vec![0.0, 1.0],
                alloc::vec![0.0],
                alloc::vec![7.0],
                alloc::vec![1.0, 1.0],
                alloc::vec![20.0, 20.0]
            ),
            Err(FieldError::Ragged { .. })
        ));
    }

    #[test]
    fn sensor_model_validation() {
        assert!(SensorModel::default().validate().is_ok());
        let bad = SensorModel {
            noise_ec: -0.1,
            ..SensorModel::default()
        };
        assert!(matches!(
            bad.validate(),
            Err(SensorError::NegativeNoise {
                field: "noise_ec",
                ..
            })
        ));
        let bad = SensorModel {
            ec_temp_coeff: 0.0,
            ..SensorModel::default()
        };
        assert!(matches!(bad.validate(), Err(SensorError::BadCoefficient { .. })));
        // The default coefficient sits inside the documented 2-3%/C band.
        let d = SensorModel::default();
        assert!(d.ec_temp_coeff >= 0.02 && d.ec_temp_coeff <= 0.03);
    }

    #[test]
    fn clamping_keeps_samples_physical() {
        let s = WaterSample {
            t_ms: 0,
            x: 0.0,
            y: 0.0,
            heading: 0.0,
            ph: 19.0,
            ec: -3.0,
            temp: 99.0,
        }
        .clamped();
        assert_eq!(s.ph, 14.0);
        assert_eq!(s.ec, 0.0);
        assert_eq!(s.temp, 60.0);
    }
}
