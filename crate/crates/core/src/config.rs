//! The JSON analysis/simulation configuration and channel derivations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cueing::CueingMode;
use crate::error::{Error, Result};
use crate::kinematics::{
    cog_estimate, differentiate, displacement, joint_angle, vector_angle, SmoothingConfig,
};
use crate::platform::PlatformConfig;
use crate::submetrics::{order_specs, Preset, SubmetricSpec};
use crate::synth::{mode_for, ScenarioSpec};
use crate::trace::{Channel, ChannelKind, MarkerSet, MotionTrace};

/// A channel computed from others before submetrics are evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum DerivedChannel {
    /// Interior angle at `joint` between the `proximal` and `distal` markers.
    JointAngle {
        name: String,
        proximal: String,
        joint: String,
        distal: String,
    },
    /// Angle between `a - origin` and `b - origin`.
    VectorAngle {
        name: String,
        origin: String,
        a: String,
        b: String,
    },
    /// `cog_x/y/z` from weighted markers, unless the trace already has them.
    Cog,
    /// Smoothed first or second time derivative of `source`.
    Derivative {
        name: String,
        source: String,
        order: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Column mapping for input CSVs. When absent, each CSV's
    /// `<file>.schema.json` sidecar is used.
    pub schema: Option<PathBuf>,
    pub preset: Option<Preset>,
    /// Explicit submetric set; overrides `preset`.
    pub submetrics: Option<Vec<SubmetricSpec>>,
    pub derive: Vec<DerivedChannel>,
    pub smoothing: SmoothingConfig,
    pub cog_weights: BTreeMap<String, f64>,
    /// Defaults to the mode matching the preset or scenario activity.
    pub cueing_mode: Option<CueingMode>,
    pub platform: PlatformConfig,
    pub scenario: Option<ScenarioSpec>,
    /// Lag search range for correlations, in samples.
    pub max_lag: usize,
    /// Optional `[from, to]` time window (s) for correlations.
    pub correlation_window: Option<[f64; 2]>,
    pub output_dir: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            schema: None,
            preset: None,
            submetrics: None,
            derive: Vec::new(),
            smoothing: SmoothingConfig::default(),
            cog_weights: BTreeMap::new(),
            cueing_mode: None,
            platform: PlatformConfig::default(),
            scenario: None,
            max_lag: 50,
            correlation_window: None,
            output_dir: None,
        }
    }
}

impl AnalysisConfig {
    /// Parses and validates; relative paths stay relative.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: AnalysisConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid analysis config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads from a file, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        resolve(&mut cfg.schema);
        resolve(&mut cfg.output_dir);
        if let Some(schema) = &cfg.schema {
            if !schema.is_file() {
                return Err(Error::Config(format!(
                    "schema file {} does not exist",
                    schema.display()
                )));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.smoothing.validate()?;
        self.platform.validate()?;
        if let Some(specs) = &self.submetrics {
            order_specs(specs)?;
        }
        if let Some([from, to]) = self.correlation_window {
            if !(from.is_finite() && to.is_finite() && from < to) {
                return Err(Error::Config(format!(
                    "correlation_window must be [from, to] with from < to, got [{from}, {to}]"
                )));
            }
        }
        Ok(())
    }

    /// The submetric set in axis order.
    pub fn submetric_specs(&self) -> Result<Vec<SubmetricSpec>> {
        match (&self.submetrics, self.preset) {
            (Some(specs), _) => order_specs(specs),
            (None, Some(p)) => order_specs(&p.specs()),
            (None, None) => Err(Error::Config(
                "no submetrics: set `submetrics` or `preset` (or pass --preset)".into(),
            )),
        }
    }

    pub fn resolved_mode(&self) -> Option<CueingMode> {
        self.cueing_mode
            .or_else(|| self.preset.map(mode_for))
            .or_else(|| self.scenario.as_ref().map(|s| mode_for(s.activity)))
    }

    /// Adds every configured derived channel to `trace`.
    pub fn apply_derivations(&self, trace: &MotionTrace) -> Result<MotionTrace> {
        let mut out = trace.clone();
        for d in &self.derive {
            out = derive_channel(&out, d, &self.smoothing, &self.cog_weights)?;
        }
        Ok(out)
    }
}

fn derive_channel(
    trace: &MotionTrace,
    d: &DerivedChannel,
    smoothing: &SmoothingConfig,
    weights: &BTreeMap<String, f64>,
) -> Result<MotionTrace> {
    match d {
        DerivedChannel::JointAngle {
            name,
            proximal,
            joint,
            distal,
        } => {
            let m = MarkerSet::from_trace(trace, &[proximal, joint, distal])?;
            let v = joint_angle(m.get(proximal)?, m.get(joint)?, m.get(distal)?)?;
            trace.with_channel(Channel::new(name.clone(), ChannelKind::AngleRad, v))
        }
        DerivedChannel::VectorAngle { name, origin, a, b } => {
            let m = MarkerSet::from_trace(trace, &[origin, a, b])?;
            let u = displacement(m.get(origin)?, m.get(a)?)?;
            let w = displacement(m.get(origin)?, m.get(b)?)?;
            let v = vector_angle(&u, &w)?;
            trace.with_channel(Channel::new(name.clone(), ChannelKind::AngleRad, v))
        }
        DerivedChannel::Cog => {
            if ["cog_x", "cog_y", "cog_z"]
                .iter()
                .all(|c| trace.channel(c).is_some())
            {
                return Ok(trace.clone());
            }
            let names: Vec<&str> = weights.keys().map(String::as_str).collect();
            let m = MarkerSet::from_trace(trace, &names)?;
            let cog = cog_estimate(&m, weights)?;
            let mut out = trace.clone();
            for (k, axis) in ["cog_x", "cog_y", "cog_z"].iter().enumerate() {
                let v = cog.iter().map(|p| p[k]).collect();
                out = out.with_channel(Channel::new(*axis, ChannelKind::PositionM, v))?;
            }
            Ok(out)
        }
        DerivedChannel::Derivative {
            name,
            source,
            order,
        } => {
            let src = trace
                .channel(source)
                .ok_or_else(|| Error::Config(format!("missing channel `{source}`")))?;
            let v = differentiate(&src.values, trace.dt(), smoothing, *order)?;
            let kind = if *order == 2 && src.kind == ChannelKind::PositionM {
                ChannelKind::AccelerationMs2
            } else {
                ChannelKind::Dimensionless
            };
            trace.with_channel(Channel::new(name.clone(), kind, v))
        }
    }
}
