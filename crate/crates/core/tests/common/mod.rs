//! Reference implementations written independently of the library, used as
//! oracles by the integration and acceptance tests.
#![allow(dead_code)]

use immersia_core::geometry::{Circle, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Type-7 quartile from an insertion-sorted copy; the position (n-1)p is
/// split into integer and quarter parts with integer arithmetic.
pub fn quartile_oracle(values: &[f64], quarter: usize) -> f64 {
    let mut s: Vec<f64> = Vec::new();
    for &v in values {
        let at = s.iter().position(|&x| x > v).unwrap_or(s.len());
        s.insert(at, v);
    }
    let num = (s.len() - 1) * quarter;
    let (j, rem) = (num / 4, num % 4);
    if rem == 0 {
        return s[j];
    }
    s[j] + (rem as f64 / 4.0) * (s[j + 1] - s[j])
}

/// Smallest circle through all pairs (as diameters) and triples (as
/// circumcircles) that contains every point.
pub fn mec_brute_force(points: &[Point2]) -> f64 {
    if points.len() == 1 {
        return 0.0;
    }
    let scale = points
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1.0, f64::max);
    let tol = 1e-10 * scale;
    let contains = |c: Point2, r: f64| points.iter().all(|p| p.distance(c) <= r + tol);
    let mut best = f64::INFINITY;
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (points[i], points[j]);
            let c = Point2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            let r = a.distance(b) / 2.0;
            if r < best && contains(c, r) {
                best = r;
            }
            for &p in &points[j + 1..] {
                if let Some((c, r)) = circumcircle(a, b, p) {
                    if r < best && contains(c, r) {
                        best = r;
                    }
                }
            }
        }
    }
    best
}

fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<(Point2, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-14 {
        return None;
    }
    let (a2, b2, c2) = (
        a.x * a.x + a.y * a.y,
        b.x * b.x + b.y * b.y,
        c.x * c.x + c.y * c.y,
    );
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Point2::new(ux, uy);
    Some((center, center.distance(a)))
}

/// O(n^2) average ranks: count of smaller values plus the midpoint of the
/// tie block.
pub fn ranks_oracle(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks_oracle(x), ranks_oracle(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx.sqrt() * vy.sqrt())
}

/// Monte Carlo lens area: uniform samples in the lens's bounding box, in a
/// frame with the first center at the origin and the second on +x.
pub fn lens_monte_carlo(c1: &Circle, c2: &Circle, samples: u64, seed: u64) -> f64 {
    let (r1, r2) = (c1.radius, c2.radius);
    let d = c1.center.distance(c2.center);
    let x_lo = (-r1).max(d - r2);
    let x_hi = r1.min(d + r2);
    if x_hi <= x_lo {
        return 0.0;
    }
    // the lens is widest on the radical line when that line lies between
    // the centers, otherwise it is bounded by the smaller circle
    let x0 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let y_hi = if (0.0..=d).contains(&x0) {
        (r1 * r1 - x0 * x0).max(0.0).sqrt()
    } else {
        r1.min(r2)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (x_hi - x_lo, 2.0 * y_hi);
    let (r1s, r2s) = (r1 * r1, r2 * r2);
    let mut hits = 0u64;
    for _ in 0..samples {
        let x = x_lo + w * rng.random::<f64>();
        let y = -y_hi + h * rng.random::<f64>();
        let y2 = y * y;
        if x * x + y2 <= r1s && (x - d) * (x - d) + y2 <= r2s {
            hits += 1;
        }
    }
    w * h * hits as f64 / samples as f64
}

/// Angle via the arc cosine of the normalised dot product.
pub fn angle_oracle(u: [f64; 3], v: [f64; 3]) -> f64 {
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let nv = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Rotation matrix from a uniformly random unit quaternion (rejection
/// sampled in the 4-ball).
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let mut q = [0.0f64; 4];
    loop {
        for v in &mut q {
            *v = rng.random_range(-1.0..1.0);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>();
        if n > 1e-3 && n <= 1.0 {
            let n = n.sqrt();
            q.iter_mut().for_each(|v| *v /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

pub fn rotate(m: &[[f64; 3]; 3], p: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
        m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
        m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
    ]
}
