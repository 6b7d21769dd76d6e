//! Synthetic scenarios: per-condition "user motion" traces whose submetric
//! variability is dialled in by a scaling factor, plus a reference trace for
//! the platform (accelerations for ski, boat pose for boat).
//!
//! None of this is recorded human data. Every channel is a sum of 3-5
//! random-phase sinusoids in an activity band plus a little white noise,
//! rescaled so its IQR hits the target.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cueing::CueingMode;
use crate::error::{Error, Result};
use crate::submetrics::{channels, iqr, Preset};
use crate::trace::{Channel, ChannelKind, MotionTrace};

/// Label used in reports for synthetic data.
pub const SYNTHETIC_NOTE: &str = "synthetic scenario data, not recorded human motion";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    GroundTruth,
    Platform,
    NoFeedback,
}

impl Condition {
    pub const ALL: [Condition; 3] = [
        Condition::GroundTruth,
        Condition::Platform,
        Condition::NoFeedback,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::GroundTruth => "ground_truth",
            Condition::Platform => "platform",
            Condition::NoFeedback => "no_feedback",
        }
    }
}

/// Multipliers on the nominal submetric variability, per condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariabilityProfile {
    pub ground_truth: f64,
    pub platform: f64,
    pub no_feedback: f64,
}

impl Default for VariabilityProfile {
    fn default() -> Self {
        VariabilityProfile {
            ground_truth: 1.0,
            platform: 0.8,
            no_feedback: 0.4,
        }
    }
}

impl VariabilityProfile {
    pub fn scale(&self, c: Condition) -> f64 {
        match c {
            Condition::GroundTruth => self.ground_truth,
            Condition::Platform => self.platform,
            Condition::NoFeedback => self.no_feedback,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub activity: Preset,
    pub duration_s: f64,
    pub seed: u64,
    #[serde(default = "default_rate")]
    pub sample_rate_hz: f64,
    #[serde(default)]
    pub profile: VariabilityProfile,
}

fn default_rate() -> f64 {
    100.0
}

impl ScenarioSpec {
    pub fn new(activity: Preset, duration_s: f64, seed: u64) -> Self {
        ScenarioSpec {
            activity,
            duration_s,
            seed,
            sample_rate_hz: default_rate(),
            profile: VariabilityProfile::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::Generation(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(Error::Generation(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        for c in Condition::ALL {
            let s = self.profile.scale(c);
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::Generation(format!(
                    "{} variability scale must be finite and >= 0, got {s}",
                    c.label()
                )));
            }
        }
        Ok(())
    }

    fn samples(&self) -> usize {
        (self.duration_s * self.sample_rate_hz + 1e-9).floor() as usize + 1
    }
}

/// Nominal behaviour of one generated channel.
#[derive(Clone, Copy, Debug)]
struct ChannelModel {
    name: &'static str,
    kind: ChannelKind,
    mean: f64,
    iqr: f64,
    /// Values must stay inside this range.
    range: (f64, f64),
}

const fn model(
    name: &'static str,
    kind: ChannelKind,
    mean: f64,
    iqr: f64,
    range: (f64, f64),
) -> ChannelModel {
    ChannelModel {
        name,
        kind,
        mean,
        iqr,
        range,
    }
}

const ANGLE: (f64, f64) = (0.0, PI);
const FREE: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);

fn body_models(activity: Preset) -> Vec<ChannelModel> {
    use ChannelKind::*;
    match activity {
        Preset::Ski => vec![
            model(channels::COG_Z, PositionM, 0.95, 0.06, (0.0, 2.5)),
            model(channels::KNEE_R, AngleRad, 2.2, 0.30, ANGLE),
            model(channels::KNEE_L, AngleRad, 2.2, 0.26, ANGLE),
        ],
        Preset::Boat => vec![
            model(channels::COG_X, PositionM, 0.0, 0.030, FREE),
            model(channels::COG_Y, PositionM, 0.0, 0.020, FREE),
            model(channels::COP_X, PositionM, 0.0, 0.025, FREE),
            model(channels::COP_Y, PositionM, 0.0, 0.015, FREE),
            model(channels::CHEST_FEET, AngleRad, 2.8, 0.08, ANGLE),
            model(channels::SEATED_CHEST, AngleRad, 0.35, 0.06, ANGLE),
        ],
    }
}

fn reference_models(activity: Preset) -> Vec<ChannelModel> {
    use ChannelKind::*;
    match activity {
        Preset::Ski => vec![
            model("a_long", AccelerationMs2, 0.0, 1.2, FREE),
            model("a_lat", AccelerationMs2, 0.0, 1.5, FREE),
            model("a_vert", AccelerationMs2, 0.0, 0.8, FREE),
        ],
        Preset::Boat => vec![
            model("roll", AngleRad, 0.0, 0.06, FREE),
            model("pitch", AngleRad, 0.0, 0.04, FREE),
            model("heave", PositionM, 0.0, 0.015, FREE),
        ],
    }
}

fn band(activity: Preset) -> (f64, f64) {
    match activity {
        Preset::Ski => (0.3, 2.0),
        Preset::Boat => (0.05, 0.5),
    }
}

/// A zero-mean band-limited signal normalised to unit IQR.
fn unit_shape(rng: &mut ChaCha8Rng, n: usize, rate: f64, band: (f64, f64)) -> Result<Vec<f64>> {
    let parts = rng.random_range(3..=5);
    let comps: Vec<(f64, f64, f64)> = (0..parts)
        .map(|_| {
            (
                rng.random_range(0.5..=1.0),
                rng.random_range(band.0..=band.1),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let noise = Normal::new(0.0, 0.03).expect("valid sigma");
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / rate;
            comps
                .iter()
                .map(|&(a, f, ph)| a * (2.0 * PI * f * t + ph).sin())
                .sum::<f64>()
                + noise.sample(rng)
        })
        .collect();
    let spread = iqr(&raw)?;
    if spread <= 0.0 {
        return Err(Error::Generation("degenerate base signal".into()));
    }
    let mean = raw.iter().sum::<f64>() / n as f64;
    Ok(raw.iter().map(|v| (v - mean) / spread).collect())
}

fn realise(shape: &[f64], m: &ChannelModel, scale: f64, label: &str) -> Result<Channel> {
    let target = m.iqr * scale;
    let values: Vec<f64> = shape.iter().map(|u| m.mean + target * u).collect();
    let (lo, hi) = m.range;
    if values.iter().any(|v| *v < lo || *v > hi) {
        return Err(Error::Generation(format!(
            "{label}: IQR target {target} for `{}` pushes values outside [{lo}, {hi}]",
            m.name
        )));
    }
    let got = iqr(&values)?;
    if (got - target).abs() > 0.05 * target {
        return Err(Error::Generation(format!(
            "{label}: `{}` IQR {got} misses target {target}",
            m.name
        )));
    }
    Ok(Channel::new(m.name, m.kind, values))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub ground_truth: MotionTrace,
    pub platform: MotionTrace,
    pub no_feedback: MotionTrace,
    /// Platform drive signal for the activity's cueing mode.
    pub reference: MotionTrace,
}

impl Scenario {
    pub fn condition(&self, c: Condition) -> &MotionTrace {
        match c {
            Condition::GroundTruth => &self.ground_truth,
            Condition::Platform => &self.platform,
            Condition::NoFeedback => &self.no_feedback,
        }
    }

    pub fn reference_mode(&self) -> CueingMode {
        mode_for(self.spec.activity)
    }
}

pub fn mode_for(activity: Preset) -> CueingMode {
    match activity {
        Preset::Ski => CueingMode::SkiAccel,
        Preset::Boat => CueingMode::BoatPose,
    }
}

/// Builds all traces of a scenario. Deterministic in `spec`.
///
/// Channel shapes are drawn once and shared by every condition, so two
/// conditions with the same scale are identical.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.validate()?;
    let n = spec.samples();
    if n < 4 {
        return Err(Error::Generation(format!(
            "{} s at {} Hz gives {n} samples; need at least 4",
            spec.duration_s, spec.sample_rate_hz
        )));
    }
    let rate = spec.sample_rate_hz;
    let band = band(spec.activity);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let models = body_models(spec.activity);
    let shapes = models
        .iter()
        .map(|_| unit_shape(&mut rng, n, rate, band))
        .collect::<Result<Vec<_>>>()?;
    let build = |c: Condition| -> Result<MotionTrace> {
        let scale = spec.profile.scale(c);
        let chans = models
            .iter()
            .zip(&shapes)
            .map(|(m, s)| realise(s, m, scale, c.label()))
            .collect::<Result<Vec<_>>>()?;
        MotionTrace::new(0.0, rate, chans)
    };

    let mut ref_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    ref_rng.set_stream(1);
    let ref_chans = reference_models(spec.activity)
        .iter()
        .map(|m| {
            let s = unit_shape(&mut ref_rng, n, rate, band)?;
            realise(&s, m, 1.0, "reference")
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Scenario {
        spec: spec.clone(),
        ground_truth: build(Condition::GroundTruth)?,
        platform: build(Condition::Platform)?,
        no_feedback: build(Condition::NoFeedback)?,
        reference: MotionTrace::new(0.0, rate, ref_chans)?,
    })
}
