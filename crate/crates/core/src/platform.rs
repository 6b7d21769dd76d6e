//! Fixed-step simulation of the 3-leg, 3-DoF (roll, pitch, heave) platform.
//!
//! Plant: three prismatic legs at azimuths `γ_i` on a circle of radius `R`.
//! Each leg is a first-order actuator (time constant `1 / (2π·bandwidth)`)
//! driven by a velocity command and saturated at `max_leg_velocity`.
//!
//! Control is cascaded. In ski mode an outer PID on the acceleration error
//! (reference minus IMU reading) trims the tilt-coordination pose; in both
//! modes an inner PID per leg turns the leg displacement error into a
//! velocity command. The pose is recovered from the leg tips every step and
//! fed to a simulated IMU mounted at the rotation centre.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cueing::{
    boat_passthrough, AccelSample, CueingMode, PoseLimits, PoseReference, TiltCoordinator,
    DEFAULT_WASHOUT_CUTOFF_HZ, STANDARD_GRAVITY,
};
use crate::error::{Error, Result};
use crate::trace::{resample, Channel, ChannelKind, MotionTrace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Bound on the magnitude of the integral contribution `ki * ∫e`.
    pub integral_limit: f64,
}

impl PidGains {
    pub const fn new(kp: f64, ki: f64, kd: f64, integral_limit: f64) -> Self {
        PidGains {
            kp,
            ki,
            kd,
            integral_limit,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pid {
    gains: PidGains,
    integral: f64,
    prev_error: Option<f64>,
}

impl Pid {
    pub fn new(gains: PidGains) -> Self {
        Pid {
            gains,
            integral: 0.0,
            prev_error: None,
        }
    }

    pub fn update(&mut self, error: f64, dt: f64) -> f64 {
        let g = self.gains;
        let i_term = if g.ki != 0.0 {
            self.integral += error * dt;
            let bound = g.integral_limit / g.ki.abs();
            self.integral = self.integral.clamp(-bound, bound);
            g.ki * self.integral
        } else {
            0.0
        };
        let d_term = match self.prev_error {
            Some(prev) if g.kd != 0.0 => g.kd * (error - prev) / dt,
            _ => 0.0,
        };
        self.prev_error = Some(error);
        g.kp * error + i_term + d_term
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlatformConfig {
    /// Radius of the leg attachment circle, m.
    pub attachment_radius: f64,
    /// Leg attachment azimuths, degrees.
    pub leg_angles_deg: [f64; 3],
    pub actuator_bandwidth_hz: f64,
    /// Leg speed limit, m/s.
    pub max_leg_velocity: f64,
    /// Recorded for reference; the kinematic plant does not model torque.
    pub torque_capacity_nm: f64,
    /// Acceleration loop: normalised acceleration error (error / g) to tilt
    /// correction in radians.
    pub pid_outer: PidGains,
    /// Leg loop: displacement error in m to velocity command in m/s.
    pub pid_inner: PidGains,
    pub sim_rate_hz: f64,
    pub limits: PoseLimits,
    pub gravity: f64,
    pub washout_cutoff_hz: f64,
    /// Standard deviation of additive IMU noise, m/s².
    pub imu_noise_sigma: f64,
    pub seed: u64,
}

impl Default for PlatformConfig {
    fn default() -> Self {
        PlatformConfig {
            attachment_radius: 0.15,
            leg_angles_deg: [90.0, 210.0, 330.0],
            actuator_bandwidth_hz: 20.0,
            max_leg_velocity: 0.120,
            torque_capacity_nm: 892.0,
            pid_outer: PidGains::new(0.0, 4.0, 0.0, 0.05),
            pid_inner: PidGains::new(40.0, 5.0, 0.0, 0.01),
            sim_rate_hz: 1000.0,
            limits: PoseLimits::default(),
            gravity: STANDARD_GRAVITY,
            washout_cutoff_hz: DEFAULT_WASHOUT_CUTOFF_HZ,
            imu_noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl PlatformConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        pos("attachment_radius", self.attachment_radius)?;
        pos("actuator_bandwidth_hz", self.actuator_bandwidth_hz)?;
        pos("max_leg_velocity", self.max_leg_velocity)?;
        pos("sim_rate_hz", self.sim_rate_hz)?;
        pos("gravity", self.gravity)?;
        pos("washout_cutoff_hz", self.washout_cutoff_hz)?;
        if self.sim_rate_hz < 10.0 * self.actuator_bandwidth_hz {
            return Err(Error::Config(format!(
                "sim_rate_hz {} must be at least 10x the actuator bandwidth {}",
                self.sim_rate_hz, self.actuator_bandwidth_hz
            )));
        }
        if !(self.imu_noise_sigma.is_finite() && self.imu_noise_sigma >= 0.0) {
            return Err(Error::Config("imu_noise_sigma must be >= 0".into()));
        }
        self.limits.validate()?;
        Kinematics::new(self).map(|_| ())
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sim_rate_hz
    }

    pub fn actuator_time_constant(&self) -> f64 {
        1.0 / (2.0 * std::f64::consts::PI * self.actuator_bandwidth_hz)
    }
}

/// Leg geometry with the forward map pre-inverted.
#[derive(Clone, Debug)]
struct Kinematics {
    radius: f64,
    sin_g: [f64; 3],
    cos_g: [f64; 3],
    /// Inverse of rows `[1, sin γ_i, cos γ_i]`.
    inverse: nalgebra::Matrix3<f64>,
}

impl Kinematics {
    fn new(cfg: &PlatformConfig) -> Result<Self> {
        let gam = cfg.leg_angles_deg.map(f64::to_radians);
        let sin_g = gam.map(f64::sin);
        let cos_g = gam.map(f64::cos);
        let m = nalgebra::Matrix3::from_fn(|r, c| match c {
            0 => 1.0,
            1 => sin_g[r],
            _ => cos_g[r],
        });
        let inverse = m.try_inverse().ok_or_else(|| {
            Error::Config(format!(
                "leg azimuths {:?} do not determine a plane",
                cfg.leg_angles_deg
            ))
        })?;
        Ok(Kinematics {
            radius: cfg.attachment_radius,
            sin_g,
            cos_g,
            inverse,
        })
    }

    fn inverse_kinematics(&self, pose: &PoseReference) -> [f64; 3] {
        let (sr, sp) = (pose.roll.sin(), pose.pitch.sin());
        std::array::from_fn(|i| {
            pose.heave + self.radius * (sr * self.sin_g[i] - sp * self.cos_g[i])
        })
    }

    fn forward_kinematics(&self, legs: &[f64; 3]) -> PoseReference {
        let coeffs = self.inverse * nalgebra::Vector3::from_row_slice(legs);
        let (heave, a, b) = (coeffs[0], coeffs[1], coeffs[2]);
        PoseReference {
            roll: (a / self.radius).clamp(-1.0, 1.0).asin(),
            pitch: (-b / self.radius).clamp(-1.0, 1.0).asin(),
            heave,
        }
    }
}

/// Leg displacements for a pose:
/// `leg_i = heave + R·(sin(roll)·sin γ_i − sin(pitch)·cos γ_i)`.
pub fn inverse_kinematics(pose: &PoseReference, config: &PlatformConfig) -> Result<[f64; 3]> {
    Ok(Kinematics::new(config)?.inverse_kinematics(pose))
}

/// Pose of the plane through the three leg tips; inverts
/// [`inverse_kinematics`].
pub fn forward_kinematics(legs: &[f64; 3], config: &PlatformConfig) -> Result<PoseReference> {
    Ok(Kinematics::new(config)?.forward_kinematics(legs))
}

/// Specific force in the platform frame: `Rᵀ(a_world − g·ẑ)` with
/// `R = R_y(pitch)·R_x(roll)`. Reads `(0, 0, −g)` when level and static.
pub fn specific_force(pose: &PoseReference, accel_world: [f64; 3], g: f64) -> [f64; 3] {
    let (sr, cr) = pose.roll.sin_cos();
    let (sp, cp) = pose.pitch.sin_cos();
    let v = [accel_world[0], accel_world[1], accel_world[2] - g];
    // R_y(pitch)^T
    let u = [cp * v[0] - sp * v[2], v[1], sp * v[0] + cp * v[2]];
    // R_x(roll)^T
    [u[0], cr * u[1] + sr * u[2], -sr * u[1] + cr * u[2]]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ImuSample {
    pub specific_force: [f64; 3],
}

/// IMU reading for a pose and world-frame acceleration, with optional
/// additive Gaussian noise applied last.
pub fn imu_measure<R: rand::Rng + ?Sized>(
    pose: &PoseReference,
    accel_world: [f64; 3],
    g: f64,
    noise: Option<(&Normal<f64>, &mut R)>,
) -> ImuSample {
    let mut f = specific_force(pose, accel_world, g);
    if let Some((dist, rng)) = noise {
        for v in &mut f {
            *v += dist.sample(rng);
        }
    }
    ImuSample { specific_force: f }
}

/// What the controller is asked to render at one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    Pose(PoseReference),
    Accel(AccelSample),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlatformState {
    pub time: f64,
    pub pose: PoseReference,
    /// Pose the inner loop is tracking this step (after limits).
    pub commanded: PoseReference,
    pub legs: [f64; 3],
    pub leg_velocities: [f64; 3],
    pub leg_targets: [f64; 3],
    pub heave_velocity: f64,
    pub heave_acceleration: f64,
    pub imu: ImuSample,
    /// Roll and pitch trims from the acceleration loop.
    pub tilt_correction: [f64; 2],
}

pub struct PlatformSim {
    config: PlatformConfig,
    kin: Kinematics,
    state: PlatformState,
    tilt: TiltCoordinator,
    outer: [Pid; 2],
    inner: [Pid; 3],
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
    steps: usize,
}

impl PlatformSim {
    pub fn new(config: PlatformConfig) -> Result<Self> {
        config.validate()?;
        let kin = Kinematics::new(&config)?;
        let noise = if config.imu_noise_sigma > 0.0 {
            Some(
                Normal::new(0.0, config.imu_noise_sigma)
                    .map_err(|e| Error::Config(format!("imu noise: {e}")))?,
            )
        } else {
            None
        };
        let state = PlatformState {
            imu: ImuSample {
                specific_force: specific_force(&PoseReference::default(), [0.0; 3], config.gravity),
            },
            ..PlatformState::default()
        };
        Ok(PlatformSim {
            tilt: TiltCoordinator::new(config.gravity, config.limits, config.washout_cutoff_hz),
            outer: [Pid::new(config.pid_outer), Pid::new(config.pid_outer)],
            inner: std::array::from_fn(|_| Pid::new(config.pid_inner)),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            kin,
            noise,
            state,
            config,
            steps: 0,
        })
    }

    pub fn config(&self) -> &PlatformConfig {
        &self.config
    }

    pub fn state(&self) -> &PlatformState {
        &self.state
    }

    pub fn dt(&self) -> f64 {
        self.config.dt()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Advances one fixed step of `1 / sim_rate_hz`.
    pub fn step(&mut self, reference: &Reference) -> Result<&PlatformState> {
        let dt = self.dt();
        let cfg = &self.config;
        let g = cfg.gravity;
        let step = self.steps;
        let commanded = match reference {
            Reference::Pose(p) => {
                if !p.is_finite() {
                    return Err(fault(step, "non-finite pose reference"));
                }
                boat_passthrough(p.roll, p.pitch, p.heave, &cfg.limits)
            }
            Reference::Accel(a) => {
                if !a.is_finite() {
                    return Err(fault(step, "non-finite acceleration reference"));
                }
                let ff = self.tilt.cue(a, dt);
                let f = self.state.imu.specific_force;
                let pitch_err = (a.a_long - f[0]) / g;
                let roll_err = (f[1] - a.a_lat) / g;
                let trim = [
                    self.outer[0].update(roll_err, dt),
                    self.outer[1].update(pitch_err, dt),
                ];
                self.state.tilt_correction = trim;
                cfg.limits.clamp(PoseReference {
                    roll: ff.roll + trim[0],
                    pitch: ff.pitch + trim[1],
                    heave: ff.heave,
                })
            }
        };

        let targets = self.kin.inverse_kinematics(&commanded);
        let alpha = 1.0 - (-dt / cfg.actuator_time_constant()).exp();
        let vmax = cfg.max_leg_velocity;
        let mut legs = self.state.legs;
        let mut vel = self.state.leg_velocities;
        for i in 0..3 {
            let v_cmd = self.inner[i].update(targets[i] - legs[i], dt);
            vel[i] = (vel[i] + alpha * (v_cmd - vel[i])).clamp(-vmax, vmax);
            legs[i] += vel[i] * dt;
        }

        let pose = self.kin.forward_kinematics(&legs);
        let heave_velocity = (pose.heave - self.state.pose.heave) / dt;
        let heave_acceleration = (heave_velocity - self.state.heave_velocity) / dt;
        let noise = self.noise.as_ref().map(|n| (n, &mut self.rng));
        let imu = imu_measure(&pose, [0.0, 0.0, heave_acceleration], g, noise);

        let next = PlatformState {
            time: (step + 1) as f64 * dt,
            pose,
            commanded,
            legs,
            leg_velocities: vel,
            leg_targets: targets,
            heave_velocity,
            heave_acceleration,
            imu,
            tilt_correction: self.state.tilt_correction,
        };
        if !state_is_finite(&next) {
            return Err(fault(step, "non-finite state"));
        }
        if next.leg_velocities.iter().any(|v| v.abs() > vmax) {
            return Err(fault(step, "leg velocity above limit"));
        }
        self.state = next;
        self.steps += 1;
        Ok(&self.state)
    }
}

fn fault(step: usize, what: &str) -> Error {
    Error::SimulationFault {
        step,
        what: what.into(),
    }
}

fn state_is_finite(s: &PlatformState) -> bool {
    s.pose.is_finite()
        && s.commanded.is_finite()
        && s.legs
            .iter()
            .chain(&s.leg_velocities)
            .all(|v| v.is_finite())
        && s.heave_velocity.is_finite()
        && s.heave_acceleration.is_finite()
        && s.imu.specific_force.iter().all(|v| v.is_finite())
}

/// Reference channels each mode reads.
pub fn reference_channels(mode: CueingMode) -> [&'static str; 3] {
    match mode {
        CueingMode::SkiAccel => ["a_long", "a_lat", "a_vert"],
        CueingMode::BoatPose => ["roll", "pitch", "heave"],
    }
}

/// Output of [`simulate`].
#[derive(Clone, Debug)]
pub struct SimulationRun {
    /// Pose, legs, IMU and commanded pose at the reference sample times.
    pub trace: MotionTrace,
    pub steps: usize,
    pub max_leg_speed: f64,
}

/// Drives the platform with a reference trace.
///
/// The reference is linearly interpolated to the simulation rate; outputs
/// are recorded at the reference sample times.
pub fn simulate(
    reference: &MotionTrace,
    config: &PlatformConfig,
    mode: CueingMode,
) -> Result<SimulationRun> {
    let names = reference_channels(mode);
    let cols = names
        .iter()
        .map(|n| {
            reference.values(n).map_err(|_| {
                Error::Config(format!(
                    "{mode:?} reference needs channels {names:?}; `{n}` is missing"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sim = PlatformSim::new(config.clone())?;
    let sim_rate = config.sim_rate_hz;
    let ref_rate = reference.sample_rate();
    let n_ref = reference.len();
    let total_steps = (reference.duration() * sim_rate).round() as usize;

    let sample = |k: usize| -> [f64; 3] {
        let s = (k as f64 * ref_rate / sim_rate).min((n_ref - 1) as f64);
        let i = (s.floor() as usize).min(n_ref - 2);
        let w = s - i as f64;
        std::array::from_fn(|c| cols[c][i] + (cols[c][i + 1] - cols[c][i]) * w)
    };

    const OUT: [(&str, ChannelKind); 12] = [
        ("roll", ChannelKind::AngleRad),
        ("pitch", ChannelKind::AngleRad),
        ("heave", ChannelKind::PositionM),
        ("leg_1", ChannelKind::PositionM),
        ("leg_2", ChannelKind::PositionM),
        ("leg_3", ChannelKind::PositionM),
        ("imu_x", ChannelKind::AccelerationMs2),
        ("imu_y", ChannelKind::AccelerationMs2),
        ("imu_z", ChannelKind::AccelerationMs2),
        ("cmd_roll", ChannelKind::AngleRad),
        ("cmd_pitch", ChannelKind::AngleRad),
        ("cmd_heave", ChannelKind::PositionM),
    ];
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(n_ref); OUT.len()];
    let record = |out: &mut Vec<Vec<f64>>, s: &PlatformState| {
        let row = [
            s.pose.roll,
            s.pose.pitch,
            s.pose.heave,
            s.legs[0],
            s.legs[1],
            s.legs[2],
            s.imu.specific_force[0],
            s.imu.specific_force[1],
            s.imu.specific_force[2],
            s.commanded.roll,
            s.commanded.pitch,
            s.commanded.heave,
        ];
        for (col, v) in out.iter_mut().zip(row) {
            col.push(v);
        }
    };

    let record_step = |j: usize| ((j as f64) * sim_rate / ref_rate).round() as usize;
    let mut next_record = 0;
    let mut max_speed: f64 = 0.0;
    record(&mut out, sim.state());
    next_record += 1;
    for k in 0..total_steps {
        let v = sample(k);
        let r = match mode {
            CueingMode::SkiAccel => Reference::Accel(AccelSample::new(v[0], v[1], v[2])),
            CueingMode::BoatPose => Reference::Pose(PoseReference::new(v[0], v[1], v[2])),
        };
        let s = sim.step(&r)?;
        max_speed = s
            .leg_velocities
            .iter()
            .fold(max_speed, |m, v| m.max(v.abs()));
        while next_record < n_ref && record_step(next_record) <= k + 1 {
            record(&mut out, s);
            next_record += 1;
        }
    }
    while next_record < n_ref {
        record(&mut out, sim.state());
        next_record += 1;
    }

    let channels = OUT
        .iter()
        .zip(out)
        .map(|(&(name, kind), values)| Channel::new(name, kind, values))
        .collect();
    let trace = MotionTrace::new(reference.start_time(), ref_rate, channels)?;
    Ok(SimulationRun {
        trace,
        steps: sim.steps(),
        max_leg_speed: max_speed,
    })
}

/// Convenience: the simulation trace resampled to `rate`.
pub fn simulate_at(
    reference: &MotionTrace,
    config: &PlatformConfig,
    mode: CueingMode,
    rate: f64,
) -> Result<MotionTrace> {
    resample(&simulate(reference, config, mode)?.trace, rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn ik_rest_and_heave() {
        let cfg = PlatformConfig::default();
        assert_eq!(
            inverse_kinematics(&PoseReference::default(), &cfg).unwrap(),
            [0.0; 3]
        );
        let legs = inverse_kinematics(&PoseReference::new(0.0, 0.0, 0.01), &cfg).unwrap();
        for l in legs {
            assert!((l - 0.01).abs() < 1e-15);
        }
    }

    #[test]
    fn ik_pitch_matches_rotated_attachment_heights() {
        let cfg = PlatformConfig::default();
        let pitch = deg(5.0);
        let legs = inverse_kinematics(&PoseReference::new(0.0, pitch, 0.0), &cfg).unwrap();
        // rotate (R cos γ, R sin γ, 0) about y by `pitch` and read off z
        for (i, g) in [90.0f64, 210.0, 330.0].iter().enumerate() {
            let x = 0.15 * g.to_radians().cos();
            let z = -x * pitch.sin();
            assert!((legs[i] - z).abs() < 1e-9, "leg {i}");
        }
    }

    #[test]
    fn fk_inverts_ik() {
        let cfg = PlatformConfig::default();
        let pose = PoseReference::new(deg(7.0), deg(-4.0), 0.02);
        let legs = inverse_kinematics(&pose, &cfg).unwrap();
        let back = forward_kinematics(&legs, &cfg).unwrap();
        assert!((back.roll - pose.roll).abs() < 1e-12);
        assert!((back.pitch - pose.pitch).abs() < 1e-12);
        assert!((back.heave - pose.heave).abs() < 1e-12);
    }

    #[test]
    fn imu_level_and_pitched() {
        let g = STANDARD_GRAVITY;
        let f = specific_force(&PoseReference::default(), [0.0; 3], g);
        assert_eq!(f, [0.0, 0.0, -g]);
        let th = deg(8.0);
        let f = specific_force(&PoseReference::new(0.0, th, 0.0), [0.0; 3], g);
        assert!((f[0] - g * th.sin()).abs() < 1e-9);
        let phi = deg(6.0);
        let f = specific_force(&PoseReference::new(phi, 0.0, 0.0), [0.0; 3], g);
        assert!((f[1] + g * phi.sin()).abs() < 1e-9);
    }

    #[test]
    fn imu_noise_is_seeded() {
        let n = Normal::new(0.0, 0.1).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let p = PoseReference::new(0.1, 0.2, 0.0);
        let x = imu_measure(&p, [0.0; 3], 9.81, Some((&n, &mut a)));
        let y = imu_measure(&p, [0.0; 3], 9.81, Some((&n, &mut b)));
        assert_eq!(x, y);
        let clean = imu_measure::<ChaCha8Rng>(&p, [0.0; 3], 9.81, None);
        assert_eq!(clean, imu_measure::<ChaCha8Rng>(&p, [0.0; 3], 9.81, None));
    }

    #[test]
    fn rest_stays_at_rest() {
        let mut sim = PlatformSim::new(PlatformConfig::default()).unwrap();
        for _ in 0..1000 {
            let s = sim
                .step(&Reference::Pose(PoseReference::default()))
                .unwrap();
            assert_eq!(s.pose, PoseReference::default());
            assert_eq!(s.legs, [0.0; 3]);
            assert_eq!(s.leg_velocities, [0.0; 3]);
        }
        let mut sim = PlatformSim::new(PlatformConfig::default()).unwrap();
        for _ in 0..1000 {
            let s = sim.step(&Reference::Accel(AccelSample::default())).unwrap();
            assert_eq!(s.legs, [0.0; 3]);
            assert_eq!(s.imu.specific_force, [0.0, 0.0, -STANDARD_GRAVITY]);
        }
    }

    #[test]
    fn step_response_settles() {
        let target = PoseReference::new(deg(5.0), deg(-3.0), 0.01);
        let mut sim = PlatformSim::new(PlatformConfig::default()).unwrap();
        for k in 0..1500 {
            let s = sim.step(&Reference::Pose(target)).unwrap().clone();
            if k + 1 >= 500 {
                assert!(
                    (s.pose.roll - target.roll).abs() <= 0.02 * target.roll.abs(),
                    "t={}",
                    s.time
                );
                assert!((s.pose.pitch - target.pitch).abs() <= 0.02 * target.pitch.abs());
                assert!((s.pose.heave - target.heave).abs() <= 0.02 * target.heave.abs());
            }
        }
    }

    #[test]
    fn fast_ramp_pins_leg_velocity() {
        let cfg = PlatformConfig::default();
        let mut sim = PlatformSim::new(cfg.clone()).unwrap();
        // 0.5 m/s heave ramp, well above the 0.12 m/s leg limit
        let mut pinned = 0;
        for k in 0..100 {
            let h = 0.5 * (k + 1) as f64 * sim.dt();
            let s = sim
                .step(&Reference::Pose(PoseReference::new(0.0, 0.0, h)))
                .unwrap();
            for v in s.leg_velocities {
                assert!(v.abs() <= cfg.max_leg_velocity);
            }
            if k >= 30 {
                assert_eq!(s.leg_velocities, [cfg.max_leg_velocity; 3], "step {k}");
                pinned += 1;
            }
        }
        assert_eq!(pinned, 70);
    }

    #[test]
    fn non_finite_reference_faults() {
        let mut sim = PlatformSim::new(PlatformConfig::default()).unwrap();
        sim.step(&Reference::Pose(PoseReference::default()))
            .unwrap();
        let err = sim
            .step(&Reference::Pose(PoseReference::new(f64::NAN, 0.0, 0.0)))
            .unwrap_err();
        assert!(matches!(err, Error::SimulationFault { step: 1, .. }));
    }

    #[test]
    fn config_rejects_slow_sim_rate() {
        let cfg = PlatformConfig {
            sim_rate_hz: 100.0,
            ..PlatformConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = PlatformConfig {
            leg_angles_deg: [0.0, 0.0, 0.0],
            ..PlatformConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn simulate_checks_channels() {
        let tr = MotionTrace::new(
            0.0,
            100.0,
            vec![Channel::new("roll", ChannelKind::AngleRad, vec![0.0; 10])],
        )
        .unwrap();
        let err = simulate(&tr, &PlatformConfig::default(), CueingMode::BoatPose).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn simulate_zero_ski_reference() {
        let zeros = |n: &str| Channel::new(n, ChannelKind::AccelerationMs2, vec![0.0; 200]);
        let tr = MotionTrace::new(
            0.0,
            100.0,
            vec![zeros("a_long"), zeros("a_lat"), zeros("a_vert")],
        )
        .unwrap();
        let run = simulate(&tr, &PlatformConfig::default(), CueingMode::SkiAccel).unwrap();
        assert_eq!(run.trace.len(), 200);
        for name in ["roll", "pitch", "heave", "leg_1", "imu_x", "imu_y"] {
            assert!(
                run.trace.values(name).unwrap().iter().all(|&v| v == 0.0),
                "{name}"
            );
        }
        assert!(run
            .trace
            .values("imu_z")
            .unwrap()
            .iter()
            .all(|&v| v == -STANDARD_GRAVITY));
    }

    #[test]
    fn simulate_is_deterministic_with_noise() {
        let n = 300;
        let roll: Vec<f64> = (0..n)
            .map(|i| 0.05 * (2.0 * PI * 0.5 * i as f64 / 100.0).sin())
            .collect();
        let tr = MotionTrace::new(
            0.0,
            100.0,
            vec![
                Channel::new("roll", ChannelKind::AngleRad, roll),
                Channel::new("pitch", ChannelKind::AngleRad, vec![0.0; n]),
                Channel::new("heave", ChannelKind::PositionM, vec![0.0; n]),
            ],
        )
        .unwrap();
        let cfg = PlatformConfig {
            imu_noise_sigma: 0.05,
            seed: 11,
            ..PlatformConfig::default()
        };
        let a = simulate(&tr, &cfg, CueingMode::BoatPose).unwrap();
        let b = simulate(&tr, &cfg, CueingMode::BoatPose).unwrap();
        assert_eq!(a.trace, b.trace);
    }
}
