//! Radar-polygon geometry and the gyration-circle overlap index.
//!
//! Submetric values are laid out on `n` evenly spaced radar axes. The
//! polygon's vertices are treated as unit point masses: their mean is the
//! circle centre, and the radius is `sqrt(I / A)` with `I` the vertex moment
//! about that centre and `A` the shoelace area. Two such circles are compared
//! by intersection over union, as a percentage.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Circle::new(
            Point2::new(self.center.x + dx, self.center.y + dy),
            self.radius,
        )
    }
}

/// Polygons with shoelace area at or below this are treated as points.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Two point circles closer than this count as coincident.
pub const COINCIDENT_DISTANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RadarPolygon {
    values: Vec<f64>,
    vertices: Vec<Point2>,
}

/// Angle of the `i`-th radar axis (zero-based) out of `n`.
pub fn axis_angle(i: usize, n: usize) -> f64 {
    2.0 * PI * i as f64 / n as f64
}

/// Places `values` on evenly spaced radar axes, the first along +x, counter-
/// clockwise.
pub fn radar_polygon(values: &[f64]) -> Result<RadarPolygon> {
    let n = values.len();
    if n < 3 {
        return Err(Error::InsufficientAxes(n));
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(Error::Argument(format!(
            "radar value {i} must be finite and nonnegative, got {v}"
        )));
    }
    let vertices = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let theta = axis_angle(i, n);
            Point2::new(v * theta.cos(), v * theta.sin())
        })
        .collect();
    Ok(RadarPolygon {
        values: values.to_vec(),
        vertices,
    })
}

impl RadarPolygon {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Arithmetic mean of the vertices. This is not the area centroid.
    pub fn vertex_centroid(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point2::new(sx / n, sy / n)
    }

    /// Sum of squared vertex distances to `centroid`.
    pub fn vertex_moment(&self, centroid: Point2) -> f64 {
        self.vertices
            .iter()
            .map(|p| (p.x - centroid.x).powi(2) + (p.y - centroid.y).powi(2))
            .sum()
    }

    pub fn shoelace_area(&self) -> f64 {
        let n = self.vertices.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a.x * b.y - b.x * a.y
            })
            .sum();
        (0.5 * twice).abs()
    }

    pub fn gyration_circle(&self, label: impl Into<String>) -> GyrationCircle {
        let centroid = self.vertex_centroid();
        let moment = self.vertex_moment(centroid);
        let area = self.shoelace_area();
        let degenerate = area <= DEGENERATE_AREA;
        let radius = if degenerate {
            0.0
        } else {
            (moment / area).sqrt()
        };
        GyrationCircle {
            label: label.into(),
            circle: Circle::new(centroid, radius),
            moment,
            area,
            degenerate,
        }
    }
}

/// Equivalent circle of one condition's radar polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GyrationCircle {
    /// Condition the circle came from (ground truth, platform, ...).
    pub label: String,
    pub circle: Circle,
    /// Vertex point-mass moment about the centre.
    pub moment: f64,
    /// Shoelace area of the polygon.
    pub area: f64,
    /// The polygon had (near) zero area, so the circle collapsed to a point.
    pub degenerate: bool,
}

impl GyrationCircle {
    pub fn center(&self) -> Point2 {
        self.circle.center
    }

    pub fn radius(&self) -> f64 {
        self.circle.radius
    }
}

/// Orders a pair so the larger radius comes first; ties are broken on the
/// centre so the result does not depend on argument order.
fn canonical<'a>(a: &'a Circle, b: &'a Circle) -> (&'a Circle, &'a Circle) {
    let key = |c: &Circle| (c.radius, c.center.x, c.center.y);
    let (ka, kb) = (key(a), key(b));
    if ka.0 > kb.0 || (ka.0 == kb.0 && (ka.1, ka.2) >= (kb.1, kb.2)) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Area of the lens shared by two circles.
pub fn circle_intersection_area(c1: &Circle, c2: &Circle) -> f64 {
    let (big, small) = canonical(c1, c2);
    let (r1, r2) = (big.radius, small.radius);
    let d = big.center.distance(small.center);
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= r1 - r2 {
        return PI * r2 * r2;
    }
    let cos1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let cos2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    let area = r1 * r1 * cos1.acos() + r2 * r2 * cos2.acos() - 0.5 * kite.max(0.0).sqrt();
    area.clamp(0.0, PI * r2 * r2)
}

/// Pairwise quantities behind one immersion index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub distance: f64,
    pub intersection_area: f64,
    pub union_area: f64,
    pub index_percent: f64,
}

/// Intersection over union of two circles, in percent.
///
/// Point circles (radius 0) score 100 against a coincident point circle and
/// 0 against anything else.
pub fn overlap(test: &Circle, reference: &Circle) -> Overlap {
    let (a, b) = canonical(test, reference);
    let distance = a.center.distance(b.center);
    if a.radius == 0.0 && b.radius == 0.0 {
        return Overlap {
            distance,
            intersection_area: 0.0,
            union_area: 0.0,
            index_percent: if distance <= COINCIDENT_DISTANCE {
                100.0
            } else {
                0.0
            },
        };
    }
    let inter = circle_intersection_area(a, b);
    let union = a.area() + b.area() - inter;
    let index = (inter / union * 100.0).clamp(0.0, 100.0);
    Overlap {
        distance,
        intersection_area: inter,
        union_area: union,
        index_percent: index,
    }
}

pub fn immersion_index(test: &Circle, reference: &Circle) -> f64 {
    overlap(test, reference).index_percent
}
