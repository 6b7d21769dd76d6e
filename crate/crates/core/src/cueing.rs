//! Mapping of virtual-environment motion onto platform pose references.
//!
//! Ski mode renders sustained longitudinal and lateral acceleration by tilt:
//! the platform pitches or rolls until the gravity component along the body
//! axis equals the target acceleration. Vertical acceleration goes to heave
//! through a second-order high-pass washout so sustained offsets stay
//! bounded. Boat mode passes roll, pitch and heave straight through.
//!
//! Sign convention: positive pitch renders forward (positive longitudinal)
//! acceleration, positive roll renders leftward lateral acceleration, i.e.
//! negative `a_lat`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AccelSample {
    pub a_long: f64,
    pub a_lat: f64,
    /// Gravity-free vertical acceleration.
    pub a_vert: f64,
}

impl AccelSample {
    pub fn new(a_long: f64, a_lat: f64, a_vert: f64) -> Self {
        AccelSample {
            a_long,
            a_lat,
            a_vert,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a_long.is_finite() && self.a_lat.is_finite() && self.a_vert.is_finite()
    }
}

/// Commanded platform pose: roll and pitch in radians, heave in metres.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PoseReference {
    pub roll: f64,
    pub pitch: f64,
    pub heave: f64,
}

impl PoseReference {
    pub fn new(roll: f64, pitch: f64, heave: f64) -> Self {
        PoseReference { roll, pitch, heave }
    }

    pub fn is_finite(&self) -> bool {
        self.roll.is_finite() && self.pitch.is_finite() && self.heave.is_finite()
    }
}

/// Symmetric pose bounds. Angles in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseLimits {
    pub roll_max: f64,
    pub pitch_max: f64,
    pub heave_max: f64,
}

impl Default for PoseLimits {
    /// 15° roll and pitch, 5 cm heave.
    fn default() -> Self {
        PoseLimits {
            roll_max: 15.0 * PI / 180.0,
            pitch_max: 15.0 * PI / 180.0,
            heave_max: 0.05,
        }
    }
}

impl PoseLimits {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.roll_max) && ok(self.pitch_max) && ok(self.heave_max)) {
            return Err(Error::Config(format!(
                "pose limits must be positive: {self:?}"
            )));
        }
        if self.roll_max >= PI / 2.0 || self.pitch_max >= PI / 2.0 {
            return Err(Error::Config("tilt limits must be below 90 degrees".into()));
        }
        Ok(())
    }

    pub fn clamp(&self, pose: PoseReference) -> PoseReference {
        PoseReference {
            roll: pose.roll.clamp(-self.roll_max, self.roll_max),
            pitch: pose.pitch.clamp(-self.pitch_max, self.pitch_max),
            heave: pose.heave.clamp(-self.heave_max, self.heave_max),
        }
    }

    pub fn contains(&self, pose: &PoseReference) -> bool {
        pose.roll.abs() <= self.roll_max
            && pose.pitch.abs() <= self.pitch_max
            && pose.heave.abs() <= self.heave_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CueingMode {
    SkiAccel,
    BoatPose,
}

/// Tilt angle whose gravity component `g * sin(angle)` equals `accel`,
/// saturating at `limit`.
fn tilt_for(accel: f64, g: f64, limit: f64) -> f64 {
    let s = accel / g;
    let bound = limit.sin();
    if s >= bound {
        limit
    } else if s <= -bound {
        -limit
    } else {
        s.asin()
    }
}

/// Roll and pitch that render the horizontal components of `a` by tilt.
pub fn tilt_angles(a: &AccelSample, g: f64, limits: &PoseLimits) -> (f64, f64) {
    let pitch = tilt_for(a.a_long, g, limits.pitch_max);
    let roll = tilt_for(-a.a_lat, g, limits.roll_max);
    (roll, pitch)
}

/// Double integrator behind a second-order high-pass: heave follows
/// `x'' = a - 2*zeta*w*x' - w^2*x`, so a sustained `a` settles at `a / w^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeaveWashout {
    omega: f64,
    zeta: f64,
    position: f64,
    velocity: f64,
}

pub const DEFAULT_WASHOUT_CUTOFF_HZ: f64 = 0.5;

impl HeaveWashout {
    pub fn new(cutoff_hz: f64) -> Self {
        HeaveWashout {
            omega: 2.0 * PI * cutoff_hz,
            zeta: std::f64::consts::FRAC_1_SQRT_2,
            position: 0.0,
            velocity: 0.0,
        }
    }

    /// Advances by `dt` and returns the (unclamped) heave.
    pub fn step(&mut self, a_vert: f64, dt: f64) -> f64 {
        let w = self.omega;
        let accel = a_vert - 2.0 * self.zeta * w * self.velocity - w * w * self.position;
        self.velocity += accel * dt;
        self.position += self.velocity * dt;
        self.position
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    pub fn reset(&mut self) {
        self.position = 0.0;
        self.velocity = 0.0;
    }
}

/// Stateful ski-mode cueing: tilt coordination plus heave washout.
#[derive(Clone, Debug)]
pub struct TiltCoordinator {
    pub g: f64,
    pub limits: PoseLimits,
    washout: HeaveWashout,
}

impl TiltCoordinator {
    pub fn new(g: f64, limits: PoseLimits, washout_cutoff_hz: f64) -> Self {
        TiltCoordinator {
            g,
            limits,
            washout: HeaveWashout::new(washout_cutoff_hz),
        }
    }

    pub fn cue(&mut self, a: &AccelSample, dt: f64) -> PoseReference {
        let (roll, pitch) = tilt_angles(a, self.g, &self.limits);
        let heave = self
            .washout
            .step(a.a_vert, dt)
            .clamp(-self.limits.heave_max, self.limits.heave_max);
        PoseReference { roll, pitch, heave }
    }
}

/// Boat mode: the boat's own roll, pitch and heave, clamped to the limits.
pub fn boat_passthrough(roll: f64, pitch: f64, heave: f64, limits: &PoseLimits) -> PoseReference {
    limits.clamp(PoseReference { roll, pitch, heave })
}
