//! Scalar variability per submetric: the interquartile range of a 1D channel,
//! or the minimum enclosing circle radius of a 2D point cloud.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2};
use crate::trace::MotionTrace;

/// Name of the quartile estimator, echoed into reports.
pub const QUARTILE_RULE: &str =
    "linear interpolation between order statistics at (n-1)p, zero-based (type 7)";

/// First and third quartiles.
pub fn quartiles(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("quartiles of non-finite data".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok((
        quantile_sorted(&sorted, 0.25),
        quantile_sorted(&sorted, 0.75),
    ))
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= sorted.len() {
        return sorted[lo];
    }
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn iqr(values: &[f64]) -> Result<f64> {
    let (q1, q3) = quartiles(values)?;
    Ok(q3 - q1)
}

const MEC_SEED: u64 = 0x6d65_635f_7365_6564;

fn contains(c: &Circle, p: Point2) -> bool {
    c.center.distance(p) <= c.radius + 1e-12 * (1.0 + c.radius)
}

fn circle_from_two(a: Point2, b: Point2) -> Circle {
    let center = Point2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    Circle::new(center, center.distance(a).max(center.distance(b)))
}

/// Circumcircle, or the widest two-point circle when the points are collinear.
fn circle_from_three(a: Point2, b: Point2, c: Point2) -> Circle {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
    if d.abs() <= 1e-14 * scale {
        let pairs = [
            circle_from_two(a, b),
            circle_from_two(a, c),
            circle_from_two(b, c),
        ];
        return pairs
            .into_iter()
            .max_by(|p, q| p.radius.total_cmp(&q.radius))
            .expect("three candidates");
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point2::new(a.x + ux, a.y + uy);
    let radius = center
        .distance(a)
        .max(center.distance(b))
        .max(center.distance(c));
    Circle::new(center, radius)
}

/// Smallest circle containing every point (randomized incremental
/// construction with a fixed shuffle seed).
pub fn min_enclosing_circle(points: &[Point2]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::Argument(
            "minimum enclosing circle of no points".into(),
        ));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Argument("non-finite point".into()));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(MEC_SEED));

    let mut c = Circle::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if contains(&c, pts[i]) {
            continue;
        }
        c = Circle::new(pts[i], 0.0);
        for j in 0..i {
            if contains(&c, pts[j]) {
                continue;
            }
            c = circle_from_two(pts[i], pts[j]);
            for k in 0..j {
                if !contains(&c, pts[k]) {
                    c = circle_from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Ok(c)
}

/// Declarative definition of one radar axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmetricSpec {
    pub name: String,
    /// 1 for an IQR of one channel, 2 for the MEC radius of an (x, y) cloud.
    pub dimensionality: u8,
    pub sources: Vec<String>,
    pub axis_index: usize,
}

impl SubmetricSpec {
    pub fn one_d(name: &str, source: &str, axis_index: usize) -> Self {
        SubmetricSpec {
            name: name.into(),
            dimensionality: 1,
            sources: vec![source.into()],
            axis_index,
        }
    }

    pub fn two_d(name: &str, x: &str, y: &str, axis_index: usize) -> Self {
        SubmetricSpec {
            name: name.into(),
            dimensionality: 2,
            sources: vec![x.into(), y.into()],
            axis_index,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.dimensionality, self.sources.len()) {
            (1, 1) | (2, 2) => Ok(()),
            (d, s) => Err(Error::Config(format!(
                "submetric `{}`: dimensionality {d} needs {d} source channel(s), got {s}",
                self.name
            ))),
        }
    }
}

/// Checks a spec set and returns it ordered by axis.
///
/// Axis indices must be exactly `0..n` and names unique; at least three axes
/// are needed for a polygon.
pub fn order_specs(specs: &[SubmetricSpec]) -> Result<Vec<SubmetricSpec>> {
    if specs.len() < 3 {
        return Err(Error::InsufficientAxes(specs.len()));
    }
    let mut names = HashSet::new();
    for s in specs {
        s.validate()?;
        if !names.insert(s.name.as_str()) {
            return Err(Error::Config(format!("duplicate submetric `{}`", s.name)));
        }
    }
    let mut ordered = specs.to_vec();
    ordered.sort_by_key(|s| s.axis_index);
    for (i, s) in ordered.iter().enumerate() {
        if s.axis_index != i {
            return Err(Error::Config(format!(
                "axis indices must be 0..{} without gaps or repeats",
                specs.len()
            )));
        }
    }
    Ok(ordered)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmetricValue {
    pub name: String,
    pub value: f64,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mec_center: Option<Point2>,
}

pub fn evaluate_submetric(trace: &MotionTrace, spec: &SubmetricSpec) -> Result<SubmetricValue> {
    spec.validate()?;
    let channel = |name: &str| {
        trace.channel(name).ok_or_else(|| {
            Error::Config(format!(
                "submetric `{}`: missing channel `{name}`",
                spec.name
            ))
        })
    };
    if spec.dimensionality == 1 {
        let ch = channel(&spec.sources[0])?;
        let (q1, q3) = quartiles(&ch.values)?;
        return Ok(SubmetricValue {
            name: spec.name.clone(),
            value: q3 - q1,
            unit: ch.kind.unit().to_string(),
            q1: Some(q1),
            q3: Some(q3),
            mec_center: None,
        });
    }
    let (cx, cy) = (channel(&spec.sources[0])?, channel(&spec.sources[1])?);
    if cx.kind != cy.kind {
        return Err(Error::Config(format!(
            "submetric `{}`: plane channels have different kinds ({} vs {})",
            spec.name, cx.kind, cy.kind
        )));
    }
    let points: Vec<Point2> = cx
        .values
        .iter()
        .zip(&cy.values)
        .map(|(&x, &y)| Point2::new(x, y))
        .collect();
    let mec = min_enclosing_circle(&points)?;
    Ok(SubmetricValue {
        name: spec.name.clone(),
        value: mec.radius,
        unit: cx.kind.unit().to_string(),
        q1: None,
        q3: None,
        mec_center: Some(mec.center),
    })
}

/// Evaluates every spec in axis order.
pub fn evaluate_all(trace: &MotionTrace, specs: &[SubmetricSpec]) -> Result<Vec<SubmetricValue>> {
    order_specs(specs)?
        .iter()
        .map(|s| evaluate_submetric(trace, s))
        .collect()
}

/// Built-in submetric sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// CoG vertical range and both knee ranges of motion.
    Ski,
    /// CoG sway and CoP variation (both planar), the CoG–chest/CoG–feet angle,
    /// and the seated CoG–chest angle.
    Boat,
}

pub mod channels {
    pub const COG_X: &str = "cog_x";
    pub const COG_Y: &str = "cog_y";
    pub const COG_Z: &str = "cog_z";
    pub const KNEE_R: &str = "knee_r_angle";
    pub const KNEE_L: &str = "knee_l_angle";
    pub const COP_X: &str = "cop_x";
    pub const COP_Y: &str = "cop_y";
    pub const CHEST_FEET: &str = "cog_chest_feet_angle";
    pub const SEATED_CHEST: &str = "seated_chest_angle";
}

impl Preset {
    pub fn specs(self) -> Vec<SubmetricSpec> {
        use channels::*;
        match self {
            Preset::Ski => vec![
                SubmetricSpec::one_d("cog_rom", COG_Z, 0),
                SubmetricSpec::one_d("knee_r_rom", KNEE_R, 1),
                SubmetricSpec::one_d("knee_l_rom", KNEE_L, 2),
            ],
            Preset::Boat => vec![
                SubmetricSpec::two_d("cog_sway", COG_X, COG_Y, 0),
                SubmetricSpec::two_d("cop_variation", COP_X, COP_Y, 1),
                SubmetricSpec::one_d("cog_chest_feet_angle", CHEST_FEET, 2),
                SubmetricSpec::one_d("seated_cog_chest_angle", SEATED_CHEST, 3),
            ],
        }
    }
}
