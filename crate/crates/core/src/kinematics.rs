//! Derived kinematic signals: smoothed finite-difference derivatives, joint
//! and inter-vector angles, and a weighted-marker centre of gravity.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{MarkerSet, Point3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingMethod {
    None,
    MovingAverage,
    SavitzkyGolay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingConfig {
    pub method: SmoothingMethod,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_polyorder")]
    pub polyorder: usize,
}

fn default_window() -> usize {
    11
}

fn default_polyorder() -> usize {
    3
}

impl Default for SmoothingConfig {
    /// Savitzky–Golay, 11 samples, cubic.
    fn default() -> Self {
        SmoothingConfig {
            method: SmoothingMethod::SavitzkyGolay,
            window: default_window(),
            polyorder: default_polyorder(),
        }
    }
}

impl SmoothingConfig {
    pub fn none() -> Self {
        SmoothingConfig {
            method: SmoothingMethod::None,
            window: 3,
            polyorder: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.method == SmoothingMethod::None {
            return Ok(());
        }
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "smoothing window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if self.method == SmoothingMethod::SavitzkyGolay && self.polyorder >= self.window {
            return Err(Error::Config(format!(
                "polyorder {} must be below the window {}",
                self.polyorder, self.window
            )));
        }
        Ok(())
    }

    /// Minimum input length the smoother accepts.
    fn min_len(&self) -> usize {
        match self.method {
            SmoothingMethod::None => 3,
            _ => self.window.max(3),
        }
    }
}

pub fn smooth(values: &[f64], cfg: &SmoothingConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if values.len() < cfg.min_len() {
        return Err(Error::InsufficientData {
            needed: cfg.min_len(),
            got: values.len(),
        });
    }
    Ok(match cfg.method {
        SmoothingMethod::None => values.to_vec(),
        SmoothingMethod::MovingAverage => moving_average(values, cfg.window / 2),
        SmoothingMethod::SavitzkyGolay => savitzky_golay(values, cfg.window, cfg.polyorder),
    })
}

/// Centered mean; the window shrinks symmetrically at the ends.
fn moving_average(values: &[f64], half: usize) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            let w = &values[i - h..=i + h];
            w.iter().sum::<f64>() / w.len() as f64
        })
        .collect()
}

/// Weights that evaluate the least-squares polynomial of degree `order`,
/// fitted over offsets `-half..=half`, at offset `at`.
fn sg_weights(half: usize, order: usize, at: f64) -> Vec<f64> {
    let w = 2 * half + 1;
    let vander = DMatrix::from_fn(w, order + 1, |r, c| (r as f64 - half as f64).powi(c as i32));
    let normal = vander.transpose() * &vander;
    let inv = normal
        .try_inverse()
        .expect("Vandermonde normal matrix is nonsingular for polyorder < window");
    let basis = DVector::from_fn(order + 1, |c, _| at.powi(c as i32));
    let weights = basis.transpose() * inv * vander.transpose();
    weights.iter().copied().collect()
}

fn savitzky_golay(values: &[f64], window: usize, order: usize) -> Vec<f64> {
    let n = values.len();
    let half = window / 2;
    let apply = |weights: &[f64], start: usize| {
        weights
            .iter()
            .zip(&values[start..start + window])
            .map(|(w, v)| w * v)
            .sum::<f64>()
    };
    let center = sg_weights(half, order, 0.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = if i < half {
            apply(&sg_weights(half, order, i as f64 - half as f64), 0)
        } else if i + half >= n {
            let start = n - window;
            apply(
                &sg_weights(half, order, (i - start) as f64 - half as f64),
                start,
            )
        } else {
            apply(&center, i - half)
        };
        out.push(v);
    }
    out
}

/// Central differences inside, second-order one-sided differences at the two
/// ends. Exact for quadratics.
fn first_difference(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * dt));
    for i in 1..n - 1 {
        d.push((x[i + 1] - x[i - 1]) / (2.0 * dt));
    }
    d.push((3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * dt));
    d
}

/// Velocity (`order` 1) or acceleration (`order` 2) of a sampled signal.
///
/// The signal is smoothed once, then differenced; the second derivative is the
/// first-difference operator applied twice. Output length equals input length.
pub fn differentiate(
    values: &[f64],
    dt: f64,
    smoothing: &SmoothingConfig,
    order: u8,
) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Argument(format!("dt must be positive, got {dt}")));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::Argument(format!(
            "derivative order must be 1 or 2, got {order}"
        )));
    }
    let smoothed = smooth(values, smoothing)?;
    let mut d = first_difference(&smoothed, dt);
    if order == 2 {
        d = first_difference(&d, dt);
    }
    Ok(d)
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

const MIN_LENGTH: f64 = 1e-12;

/// Angle in `[0, pi]` between two nonzero vectors.
fn angle_between(u: Point3, v: Point3) -> f64 {
    norm(cross(u, v)).atan2(dot(u, v))
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Argument(format!(
            "series lengths differ ({a} vs {b})"
        )));
    }
    Ok(())
}

/// Per-sample interior angle at `joint` between the segments to `proximal`
/// and `distal`.
pub fn joint_angle(proximal: &[Point3], joint: &[Point3], distal: &[Point3]) -> Result<Vec<f64>> {
    check_len(proximal.len(), joint.len())?;
    check_len(distal.len(), joint.len())?;
    (0..joint.len())
        .map(|i| {
            let u = sub(proximal[i], joint[i]);
            let v = sub(distal[i], joint[i]);
            if norm(u) <= MIN_LENGTH
                || norm(v) <= MIN_LENGTH
                || norm(sub(proximal[i], distal[i])) <= MIN_LENGTH
            {
                return Err(Error::DegenerateGeometry {
                    index: i,
                    what: "coincident markers".into(),
                });
            }
            Ok(angle_between(u, v))
        })
        .collect()
}

pub fn vector_angle(u: &[Point3], v: &[Point3]) -> Result<Vec<f64>> {
    check_len(u.len(), v.len())?;
    u.iter()
        .zip(v)
        .enumerate()
        .map(|(i, (&a, &b))| {
            if norm(a) <= MIN_LENGTH || norm(b) <= MIN_LENGTH {
                return Err(Error::DegenerateGeometry {
                    index: i,
                    what: "zero-length vector".into(),
                });
            }
            Ok(angle_between(a, b))
        })
        .collect()
}

/// Per-sample `to - from` vectors.
pub fn displacement(from: &[Point3], to: &[Point3]) -> Result<Vec<Point3>> {
    check_len(from.len(), to.len())?;
    Ok(from.iter().zip(to).map(|(&a, &b)| sub(b, a)).collect())
}

/// Weighted mean of marker positions. Weights must sum to 1.
///
/// A fallback for traces that lack a measured CoG channel; the segment
/// weights are the caller's choice.
pub fn cog_estimate(markers: &MarkerSet, weights: &BTreeMap<String, f64>) -> Result<Vec<Point3>> {
    if weights.is_empty() {
        return Err(Error::Config("empty CoG weight table".into()));
    }
    let total: f64 = weights.values().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "CoG weights sum to {total}, expected 1"
        )));
    }
    let series = weights
        .iter()
        .map(|(name, &w)| Ok((markers.get(name)?, w)))
        .collect::<Result<Vec<_>>>()?;
    let n = series[0].0.len();
    for (s, _) in &series {
        check_len(s.len(), n)?;
    }
    Ok((0..n)
        .map(|i| {
            let mut acc = [0.0; 3];
            for (s, w) in &series {
                for k in 0..3 {
                    acc[k] += w * s[i][k];
                }
            }
            acc
        })
        .collect())
}
