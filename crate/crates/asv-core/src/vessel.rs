//! 3-DOF rigid-body model of the twin-hull vehicle: pose/velocity types,
//! mass and Coriolis matrices, hull drag, propeller thrust/torque and the
//! assembled state derivative. Surge, sway and yaw only; heave, pitch and
//! roll are absent by construction. SI units throughout.

use crate::math;

/// Vehicle configuration in the earth-fixed frame: north, east, heading.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    /// Position north, m.
    pub x: f64,
    /// Position east, m.
    pub y: f64,
    /// Heading, rad, normalized to (-pi, pi].
    pub psi: f64,
}

impl Pose {
    /// Builds a pose, wrapping the heading into (-pi, pi].
    pub fn new(x: f64, y: f64, psi: f64) -> Self {
        Self {
            x,
            y,
            psi: math::wrap_angle(psi),
        }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

/// Body-frame velocity: surge, sway, yaw rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BodyVelocity {
    /// Surge velocity, m/s.
    pub u: f64,
    /// Sway velocity, m/s.
    pub v: f64,
    /// Yaw rate, rad/s.
    pub r: f64,
}

impl BodyVelocity {
    pub fn new(u: f64, v: f64, r: f64) -> Self {
        Self { u, v, r }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

/// Net body-frame force and yaw moment acting on the vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForceMoment {
    /// Surge force, N.
    pub xb: f64,
    /// Sway force, N.
    pub yb: f64,
    /// Yaw moment, N·m.
    pub n: f64,
}

impl ForceMoment {
    pub fn new(xb: f64, yb: f64, n: f64) -> Self {
        Self { xb, yb, n }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.xb.is_finite() && self.yb.is_finite() && self.n.is_finite()
    }
}

impl core::ops::Add for ForceMoment {
    type Output = ForceMoment;
    fn add(self, o: ForceMoment) -> ForceMoment {
        ForceMoment::new(self.xb + o.xb, self.yb + o.yb, self.n + o.n)
    }
}

/// Full kinematic + dynamic state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VehicleState {
    pub pose: Pose,
    pub vel: BodyVelocity,
}

impl VehicleState {
    pub fn new(pose: Pose, vel: BodyVelocity) -> Self {
        Self { pose, vel }
    }

    pub fn at_rest() -> Self {
        Self::new(Pose::origin(), BodyVelocity::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.pose.x.is_finite()
            && self.pose.y.is_finite()
            && self.pose.psi.is_finite()
            && self.vel.u.is_finite()
            && self.vel.v.is_finite()
            && self.vel.r.is_finite()
    }
}

/// Added-mass diagonal: surge (kg), sway (kg), yaw (kg·m²).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct AddedMass {
    pub surge: f64,
    pub sway: f64,
    pub yaw: f64,
}

impl AddedMass {
    pub fn zero() -> Self {
        Self {
            surge: 0.0,
            sway: 0.0,
            yaw: 0.0,
        }
    }
}

/// Physical parameters of the vehicle. Fields are public so test rigs can
/// build them literally; `validate` is the gate the configuration loader
/// uses.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct VesselParams {
    /// Rigid-body mass, kg.
    pub m: f64,
    /// Yaw inertia, kg·m².
    pub iz: f64,
    /// Added-mass diagonal terms.
    pub added_mass: AddedMass,
    /// Frictional resistance coefficient, dimensionless.
    pub cf: f64,
    /// Water density, kg/m³.
    pub rho: f64,
    /// Wetted hull area, m².
    pub ah: f64,
    /// Hull cross-flow drag coefficient, dimensionless.
    pub cdh: f64,
    /// Hull draft, m.
    pub th: f64,
    /// Hull length, m.
    pub lh: f64,
    /// Forward integration bound from the CG, m.
    pub dfx: f64,
    /// Aft integration bound from the CG, m.
    pub dax: f64,
    /// Propeller diameter, m.
    pub prop_d: f64,
    /// Thrust coefficient, dimensionless.
    pub kt: f64,
    /// Torque coefficient, dimensionless.
    pub kq: f64,
    /// Moment arm of the thrust X component, m.
    pub d1: f64,
    /// Moment arm of the thrust Y component, m.
    pub d2: f64,
    /// Port thruster inclination to the X_b axis, rad.
    pub alpha_p: f64,
    /// Starboard thruster inclination to the X_b axis, rad.
    pub alpha_s: f64,
}

/// Field-level parameter rejection, surfaced verbatim by the config loader.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("vessel.{field} must be > 0, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("vessel.{field} must be >= 0, got {value}")]
    Negative { field: &'static str, value: f64 },
    #[error("vessel.{field} must be finite")]
    NotFinite { field: &'static str },
    #[error("hull integration interval is degenerate: dfx + dax = {sum} (must be > 0)")]
    DegenerateHullBounds { sum: f64 },
}

impl VesselParams {
    /// Checks the type invariants, naming the offending field.
    pub fn validate(&self) -> Result<(), ParamError> {
        let positives = [
            ("m", self.m),
            ("iz", self.iz),
            ("rho", self.rho),
            ("prop_d", self.prop_d),
        ];
        for (field, value) in positives {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { field });
            }
            if value <= 0.0 {
                return Err(ParamError::NotPositive { field, value });
            }
        }
        let non_negatives = [
            ("added_mass.surge", self.added_mass.surge),
            ("added_mass.sway", self.added_mass.sway),
            ("added_mass.yaw", self.added_mass.yaw),
            ("cf", self.cf),
            ("ah", self.ah),
            ("cdh", self.cdh),
            ("th", self.th),
            ("lh", self.lh),
            ("kt", self.kt),
            ("kq", self.kq),
        ];
        for (field, value) in non_negatives {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { field });
            }
            if value < 0.0 {
                return Err(ParamError::Negative { field, value });
            }
        }
        for (field, value) in [
            ("dfx", self.dfx),
            ("dax", self.dax),
            ("d1", self.d1),
            ("d2", self.d2),
            ("alpha_p", self.alpha_p),
            ("alpha_s", self.alpha_s),
        ] {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { field });
            }
        }
        let sum = self.dfx + self.dax;
        if sum <= 0.0 {
            return Err(ParamError::DegenerateHullBounds { sum });
        }
        Ok(())
    }

    fn mass_diag(&self) -> [f64; 3] {
        [
            self.m + self.added_mass.surge,
            self.m + self.added_mass.sway,
            self.iz + self.added_mass.yaw,
        ]
    }
}

/// Rotation from the body frame to the earth-fixed frame, row-major.
pub fn rotation_matrix(pose: &Pose) -> [[f64; 3]; 3] {
    let c = math::cos(pose.psi);
    let s = math::sin(pose.psi);
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// Pose rate eta_dot = J(eta) * nu.
pub fn kinematic_derivative(pose: &Pose, vel: &BodyVelocity) -> [f64; 3] {
    let j = rotation_matrix(pose);
    [
        j[0][0] * vel.u + j[0][1] * vel.v,
        j[1][0] * vel.u + j[1][1] * vel.v,
        vel.r,
    ]
}

/// Diagonal mass-inertia matrix, rigid body plus added mass.
pub fn mass_matrix(p: &VesselParams) -> [[f64; 3]; 3] {
    let d = p.mass_diag();
    [
        [d[0], 0.0, 0.0],
        [0.0, d[1], 0.0],
        [0.0, 0.0, d[2]],
    ]
}

/// Rigid-body Coriolis/centripetal matrix evaluated at the current yaw rate.
pub fn coriolis_rb(p: &VesselParams, vel: &BodyVelocity) -> [[f64; 3]; 3] {
    let mr = p.m * vel.r;
    [[0.0, -mr, 0.0], [mr, 0.0, 0.0], [0.0, 0.0, 0.0]]
}

/// Viscous surge drag Cf * rho * Ah * U|U|, odd in the flow speed so that
/// it opposes motion in either direction.
pub fn hull_drag_surge(p: &VesselParams, u_rel: f64) -> f64 {
    p.cf * p.rho * p.ah * u_rel * math::fabs(u_rel)
}

const CROSS_FLOW_POINTS: usize = 32;

/// Cross-flow drag integrated over both hulls with a fixed 32-point
/// midpoint rule. The local flow profile is v(x) = v + r*x. Returns the
/// sway force and the yaw moment of the same distribution; both are the
/// magnitudes subtracted from the applied loads, so each opposes its own
/// velocity component.
pub fn cross_flow_drag(p: &VesselParams, vel: &BodyVelocity) -> (f64, f64) {
    assert!(
        p.dfx + p.dax > 0.0,
        "degenerate hull integration interval: dfx + dax <= 0"
    );
    let len = p.dfx + p.dax;
    let h = len / CROSS_FLOW_POINTS as f64;
    let coef = 0.5 * p.cdh * p.th * p.rho;
    let mut force = 0.0;
    let mut moment = 0.0;
    for i in 0..CROSS_FLOW_POINTS {
        let x = -p.dax + (i as f64 + 0.5) * h;
        let vx = vel.v + vel.r * x;
        let f = coef * vx * math::fabs(vx) * h;
        force += f;
        moment += x * f;
    }
    // Two hulls carry the same profile.
    (2.0 * force, 2.0 * moment)
}

/// Total cross-flow sway drag for both hulls, N.
pub fn hull_drag_sway(p: &VesselParams, vel: &BodyVelocity) -> f64 {
    cross_flow_drag(p, vel).0
}

/// Yaw moment of the cross-flow drag distribution, N·m.
pub fn hull_drag_yaw_moment(p: &VesselParams, vel: &BodyVelocity) -> f64 {
    cross_flow_drag(p, vel).1
}

/// Propeller thrust KT * rho * d^4 * n|n|; the n|n| form makes reverse
/// spin produce reverse thrust, which differential steering relies on.
pub fn propeller_thrust(p: &VesselParams, n_rps: f64) -> f64 {
    p.kt * p.rho * p.prop_d * p.prop_d * p.prop_d * p.prop_d * n_rps * math::fabs(n_rps)
}

/// Propeller shaft torque KQ * rho * d^5 * n|n|.
pub fn propeller_torque(p: &VesselParams, n_rps: f64) -> f64 {
    let d = p.prop_d;
    p.kq * p.rho * d * d * d * d * d * n_rps * math::fabs(n_rps)
}

/// Damping loads D(nu)*nu: quadratic surge drag, integrated cross-flow
/// sway drag, and the yaw moment of the cross-flow distribution.
pub fn damping_load(p: &VesselParams, vel: &BodyVelocity) -> ForceMoment {
    let (sway, yaw) = cross_flow_drag(p, vel);
    ForceMoment::new(hull_drag_surge(p, vel.u), sway, yaw)
}

/// Full state derivative [eta_dot; nu_dot] with
/// nu_dot = M^-1 (T_R - C(nu) nu - D(nu) nu) and no gravitational term.
pub fn dynamics_derivative(p: &VesselParams, state: &VehicleState, tr: &ForceMoment) -> [f64; 6] {
    let eta_dot = kinematic_derivative(&state.pose, &state.vel);

    let c = coriolis_rb(p, &state.vel);
    let v = [state.vel.u, state.vel.v, state.vel.r];
    let coriolis = [
        c[0][0] * v[0] + c[0][1] * v[1] + c[0][2] * v[2],
        c[1][0] * v[0] + c[1][1] * v[1] + c[1][2] * v[2],
        c[2][0] * v[0] + c[2][1] * v[1] + c[2][2] * v[2],
    ];
    let damping = damping_load(p, &state.vel);
    let rhs = [
        tr.xb - coriolis[0] - damping.xb,
        tr.yb - coriolis[1] - damping.yb,
        tr.n - coriolis[2] - damping.n,
    ];
    let mass = p.mass_diag();
    [
        eta_dot[0],
        eta_dot[1],
        eta_dot[2],
        rhs[0] / mass[0],
        rhs[1] / mass[1],
        rhs[2] / mass[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{uniform_symmetric, PI};
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    pub(crate) fn test_params() -> VesselParams {
        VesselParams {
            m: 30.0,
            iz: 6.0,
            added_mass: AddedMass::zero(),
            cf: 0.005,
            rho: 1000.0,
            ah: 0.8,
            cdh: 0.8,
            th: 0.12,
            lh: 1.2,
            dfx: 0.6,
            dax: 0.6,
            prop_d: 0.076,
            kt: 0.5,
            kq: 0.05,
            d1: 0.35,
            d2: 0.0,
            alpha_p: 0.26,
            alpha_s: 0.26,
        }
    }

    #[test]
    fn rotation_zero_angle_is_identity() {
        let j = rotation_matrix(&Pose::origin());
        let identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for (row, expect) in j.iter().zip(identity) {
            for (a, b) in row.iter().zip(expect) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rotation_quarter_turn() {
        let j = rotation_matrix(&Pose::new(0.0, 0.0, PI / 2.0));
        let expect = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for (row, erow) in j.iter().zip(expect) {
            for (a, b) in row.iter().zip(erow) {
                assert!((a - b).abs() < 1e-15, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rotation_is_orthogonal_with_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let psi = uniform_symmetric(&mut rng, 10.0);
            let j = rotation_matrix(&Pose::new(0.0, 0.0, psi));
            // J * J^T = I
            for a in 0..3 {
                for b in 0..3 {
                    let dot: f64 = (0..3).map(|k| j[a][k] * j[b][k]).sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
            let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
                - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
                + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kinematics_surge_maps_north_at_zero_heading() {
        let rate = kinematic_derivative(&Pose::origin(), &BodyVelocity::new(1.0, 0.0, 0.0));
        assert_eq!(rate, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn kinematics_surge_maps_east_at_quarter_turn() {
        let rate = kinematic_derivative(
            &Pose::new(0.0, 0.0, PI / 2.0),
            &BodyVelocity::new(1.0, 0.0, 0.0),
        );
        assert!(rate[0].abs() < 1e-15);
        assert!((rate[1] - 1.0).abs() < 1e-15);
        assert_eq!(rate[2], 0.0);
    }

    #[test]
    fn kinematics_diagonal_case() {
        // psi = pi/4, nu = (1, 1, 0.2): J*nu = (0, sqrt(2), 0.2)
        let rate = kinematic_derivative(
            &Pose::new(0.0, 0.0, PI / 4.0),
            &BodyVelocity::new(1.0, 1.0, 0.2),
        );
        assert!(rate[0].abs() < 1e-15);
        assert!((rate[1] - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((rate[2] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn mass_matrix_without_added_mass() {
        let mut p = test_params();
        p.m = 10.0;
        p.iz = 2.0;
        let m = mass_matrix(&p);
        assert_eq!(m[0][0], 10.0);
        assert_eq!(m[1][1], 10.0);
        assert_eq!(m[2][2], 2.0);
    }

    #[test]
    fn mass_matrix_adds_diagonal_terms() {
        let mut p = test_params();
        p.m = 10.0;
        p.iz = 2.0;
        p.added_mass = AddedMass {
            surge: 1.0,
            sway: 2.0,
            yaw: 0.5,
        };
        let m = mass_matrix(&p);
        assert_eq!(m[0][0], 11.0);
        assert_eq!(m[1][1], 12.0);
        assert_eq!(m[2][2], 2.5);
    }

    #[test]
    fn mass_matrix_positive_definite_for_valid_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let mut p = test_params();
            p.m = 1.0 + 99.0 * crate::math::uniform(&mut rng);
            p.iz = 0.1 + 20.0 * crate::math::uniform(&mut rng);
            p.added_mass = AddedMass {
                surge: 10.0 * crate::math::uniform(&mut rng),
                sway: 10.0 * crate::math::uniform(&mut rng),
                yaw: 5.0 * crate::math::uniform(&mut rng),
            };
            let m = mass_matrix(&p);
            // Diagonal matrix: eigenvalues are the diagonal entries.
            assert!(m[0][0] > 0.0 && m[1][1] > 0.0 && m[2][2] > 0.0);
        }
    }

    #[test]
    fn coriolis_vanishes_at_zero_yaw_rate() {
        let c = coriolis_rb(&test_params(), &BodyVelocity::zero());
        assert!(c.iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn coriolis_matches_block_form() {
        let mut p = test_params();
        p.m = 10.0;
        let c = coriolis_rb(&p, &BodyVelocity::new(0.0, 0.0, 0.5));
        assert_eq!(c[0][1], -5.0);
        assert_eq!(c[1][0], 5.0);
        assert_eq!(c[0][0], 0.0);
        assert_eq!(c[2][2], 0.0);
    }

    #[test]
    fn coriolis_does_no_work() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let mut p = test_params();
            p.m = 1.0 + 49.0 * crate::math::uniform(&mut rng);
            let vel = BodyVelocity::new(
                uniform_symmetric(&mut rng, 3.0),
                uniform_symmetric(&mut rng, 3.0),
                uniform_symmetric(&mut rng, 2.0),
            );
            let c = coriolis_rb(&p, &vel);
            let v = [vel.u, vel.v, vel.r];
            let mut quad = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    quad += v[i] * c[i][j] * v[j];
                }
            }
            assert!(quad.abs() < 1e-12, "quadratic form {quad}");
        }
    }

    #[test]
    fn surge_drag_cases() {
        let mut p = test_params();
        p.cf = 0.01;
        p.rho = 1000.0;
        p.ah = 0.5;
        assert_eq!(hull_drag_surge(&p, 0.0), 0.0);
        assert!((hull_drag_surge(&p, 2.0) - 20.0).abs() < 1e-12);
        for u in [-3.0, -0.7, 0.4, 2.5] {
            assert!((hull_drag_surge(&p, -u) + hull_drag_surge(&p, u)).abs() < 1e-12);
        }
    }

    #[test]
    fn sway_drag_constant_profile_closed_form() {
        let mut p = test_params();
        p.cdh = 1.0;
        p.th = 0.1;
        p.rho = 1000.0;
        p.dfx = 0.5;
        p.dax = 0.5;
        let f = hull_drag_sway(&p, &BodyVelocity::new(0.0, 1.0, 0.0));
        // Constant integrand: 2 * (1/2 * 1 * 0.1 * 1000 * 1 * 1) * 1.0 m
        assert!((f - 100.0).abs() < 1e-9, "{f}");
    }

    #[test]
    fn sway_drag_zero_cases() {
        let p = test_params();
        assert_eq!(hull_drag_sway(&p, &BodyVelocity::zero()), 0.0);
        // Pure yaw with symmetric bounds: odd integrand cancels the force.
        let f = hull_drag_sway(&p, &BodyVelocity::new(0.0, 0.0, 0.8));
        assert!(f.abs() < 1e-12, "{f}");
    }

    #[test]
    fn sway_drag_is_odd_in_velocity() {
        let p = test_params();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let vel = BodyVelocity::new(
                0.0,
                uniform_symmetric(&mut rng, 3.0),
                uniform_symmetric(&mut rng, 2.0),
            );
            let neg = BodyVelocity::new(0.0, -vel.v, -vel.r);
            let (f1, n1) = cross_flow_drag(&p, &vel);
            let (f2, n2) = cross_flow_drag(&p, &neg);
            assert!((f1 + f2).abs() < 1e-9);
            assert!((n1 + n2).abs() < 1e-9);
        }
    }

    #[test]
    fn yaw_drag_opposes_pure_yaw() {
        let p = test_params();
        let n = hull_drag_yaw_moment(&p, &BodyVelocity::new(0.0, 0.0, 1.0));
        assert!(n > 0.0);
    }

    #[test]
    #[should_panic(expected = "degenerate hull integration interval")]
    fn sway_drag_rejects_degenerate_interval() {
        let mut p = test_params();
        p.dfx = 0.2;
        p.dax = -0.2;
        let _ = hull_drag_sway(&p, &BodyVelocity::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn propeller_thrust_cases() {
        let mut p = test_params();
        p.kt = 0.5;
        p.rho = 1000.0;
        p.prop_d = 0.1;
        assert_eq!(propeller_thrust(&p, 0.0), 0.0);
        let t = propeller_thrust(&p, 20.0);
        assert!((t - 20.0).abs() < 1e-9, "{t}");
        // Doubling the rate quadruples the magnitude.
        let t2 = propeller_thrust(&p, 40.0);
        assert!((t2 / t - 4.0).abs() < 1e-12);
        // Reverse spin reverses thrust.
        assert!((propeller_thrust(&p, -20.0) + t).abs() < 1e-9);
    }

    #[test]
    fn propeller_torque_cases() {
        let mut p = test_params();
        p.kq = 0.05;
        p.rho = 1000.0;
        p.prop_d = 0.1;
        assert_eq!(propeller_torque(&p, 0.0), 0.0);
        let q = propeller_torque(&p, 20.0);
        assert!((q - 0.2).abs() < 1e-12, "{q}");
    }

    #[test]
    fn torque_thrust_ratio_is_rate_independent() {
        let mut p = test_params();
        p.kt = 0.5;
        p.kq = 0.05;
        p.prop_d = 0.1;
        let expect = p.kq / p.kt * p.prop_d;
        for n in [0.5, 3.0, 17.0, -8.0] {
            let ratio = propeller_torque(&p, n) / propeller_thrust(&p, n);
            assert!((ratio - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dynamics_rest_is_equilibrium() {
        let p = test_params();
        let dot = dynamics_derivative(&p, &VehicleState::at_rest(), &ForceMoment::zero());
        assert!(dot.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn dynamics_decoupled_surge() {
        let mut p = test_params();
        p.added_mass.surge = 5.0;
        let tr = ForceMoment::new(7.0, 0.0, 0.0);
        let dot = dynamics_derivative(&p, &VehicleState::at_rest(), &tr);
        assert!((dot[3] - 7.0 / 35.0).abs() < 1e-15);
        assert_eq!(dot[4], 0.0);
        assert_eq!(dot[5], 0.0);
    }

    /// Independent oracle: build the full M matrix and solve M*a = rhs by
    /// Gaussian elimination with partial pivoting, then compare to the
    /// diagonal division inside `dynamics_derivative`.
    fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in (col + 1)..3 {
                let f = a[row][col] / a[col][col];
                for k in col..3 {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = [0.0; 3];
        for row in (0..3).rev() {
            let mut s = b[row];
            for k in (row + 1)..3 {
                s -= a[row][k] * x[k];
            }
            x[row] = s / a[row][row];
        }
        x
    }

    #[test]
    fn dynamics_matches_linear_solve_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..500 {
            let mut p = test_params();
            p.added_mass = AddedMass {
                surge: 8.0 * crate::math::uniform(&mut rng),
                sway: 8.0 * crate::math::uniform(&mut rng),
                yaw: 2.0 * crate::math::uniform(&mut rng),
            };
            let state = VehicleState::new(
                Pose::new(
                    uniform_symmetric(&mut rng, 10.0),
                    uniform_symmetric(&mut rng, 10.0),
                    uniform_symmetric(&mut rng, 4.0),
                ),
                BodyVelocity::new(
                    uniform_symmetric(&mut rng, 3.0),
                    uniform_symmetric(&mut rng, 2.0),
                    uniform_symmetric(&mut rng, 1.5),
                ),
            );
            let tr = ForceMoment::new(
                uniform_symmetric(&mut rng, 30.0),
                uniform_symmetric(&mut rng, 20.0),
                uniform_symmetric(&mut rng, 10.0),
            );

            let dot = dynamics_derivative(&p, &state, &tr);

            let c = coriolis_rb(&p, &state.vel);
            let v = [state.vel.u, state.vel.v, state.vel.r];
            let d = damping_load(&p, &state.vel);
            let rhs = [
                tr.xb - (c[0][0] * v[0] + c[0][1] * v[1] + c[0][2] * v[2]) - d.xb,
                tr.yb - (c[1][0] * v[0] + c[1][1] * v[1] + c[1][2] * v[2]) - d.yb,
                tr.n - (c[2][0] * v[0] + c[2][1] * v[1] + c[2][2] * v[2]) - d.n,
            ];
            let accel = solve3(mass_matrix(&p), rhs);
            for k in 0..3 {
                assert!(
                    (dot[3 + k] - accel[k]).abs() < 1e-10 * (1.0 + accel[k].abs()),
                    "component {k}: {} vs {}",
                    dot[3 + k],
                    accel[k]
                );
            }
        }
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let mut p = test_params();
        p.m = 0.0;
        assert!(matches!(
            p.validate(),
            Err(ParamError::NotPositive { field: "m", .. })
        ));

        let mut p = test_params();
        p.added_mass.sway = -1.0;
        assert!(matches!(
            p.validate(),
            Err(ParamError::Negative {
                field: "added_mass.sway",
                ..
            })
        ));

        let mut p = test_params();
        p.dfx = -0.7;
        assert!(matches!(
            p.validate(),
            Err(ParamError::DegenerateHullBounds { .. })
        ));

        // dfx > -dax is not required, only dfx + dax > 0.
        let mut p = test_params();
        p.dfx = 0.9;
        p.dax = -0.3;
        assert!(p.validate().is_ok());

        assert!(test_params().validate().is_ok());
    }
}
