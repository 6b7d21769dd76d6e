use std::f64::consts::PI;

use immersia_core::cueing::{boat_passthrough, PoseLimits, PoseReference};
use immersia_core::geometry::{
    circle_intersection_area, immersion_index, radar_polygon, Circle, Point2,
};
use immersia_core::kinematics::{differentiate, SmoothingConfig};
use immersia_core::platform::{forward_kinematics, inverse_kinematics, PlatformConfig};
use immersia_core::submetrics::{iqr, min_enclosing_circle, order_specs, quartiles, SubmetricSpec};
use immersia_core::trace::{parse_trace, resample, Channel, ChannelKind, MotionTrace, TraceSchema};
use immersia_core::validation::spearman;
use proptest::prelude::*;

fn finite(range: f64) -> impl Strategy<Value = f64> {
    -range..range
}

fn point() -> impl Strategy<Value = Point2> {
    (finite(10.0), finite(10.0)).prop_map(|(x, y)| Point2::new(x, y))
}

fn circle() -> impl Strategy<Value = Circle> {
    (point(), 0.0..5.0f64).prop_map(|(c, r)| Circle::new(c, r))
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(
        cols in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 2..40), 1..4),
        rate in prop::sample::select(vec![10.0, 50.0, 100.0, 120.0, 1000.0]),
    ) {
        let n = cols.iter().map(Vec::len).min().unwrap();
        let chans: Vec<Channel> = cols
            .iter()
            .enumerate()
            .map(|(i, v)| Channel::new(format!("c{i}"), ChannelKind::Dimensionless, v[..n].to_vec()))
            .collect();
        let tr = MotionTrace::new(0.0, rate, chans).unwrap();
        let (back, report) = parse_trace(tr.to_csv_string().as_bytes(), &TraceSchema::for_trace(&tr)).unwrap();
        prop_assert_eq!(report.dropped_rows.len(), 0);
        prop_assert_eq!(back.channels(), tr.channels());
    }

    #[test]
    fn resample_at_own_rate_is_identity(v in prop::collection::vec(finite(1e3), 2..200), start in 0.0..100.0f64) {
        let tr = MotionTrace::new(start, 100.0, vec![Channel::new("x", ChannelKind::PositionM, v)]).unwrap();
        let back = resample(&tr, 100.0).unwrap();
        prop_assert_eq!(back.channels(), tr.channels());
    }

    #[test]
    fn second_derivative_is_first_applied_twice(v in prop::collection::vec(finite(10.0), 3..100), dt in 0.001..0.1f64) {
        let none = SmoothingConfig::none();
        let twice = differentiate(&differentiate(&v, dt, &none, 1).unwrap(), dt, &none, 1).unwrap();
        let direct = differentiate(&v, dt, &none, 2).unwrap();
        for (a, b) in twice.iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn quartiles_are_permutation_invariant(v in prop::collection::vec(finite(100.0), 4..80), seed in any::<u64>()) {
        let mut shuffled = v.clone();
        let n = shuffled.len();
        // Fisher-Yates from a simple LCG keeps this independent of the rand crate
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(quartiles(&v).unwrap(), quartiles(&shuffled).unwrap());
    }

    #[test]
    fn iqr_is_affine(v in prop::collection::vec(finite(10.0), 4..80), a in finite(20.0), b in finite(1e3)) {
        let base = iqr(&v).unwrap();
        let moved: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        let got = iqr(&moved).unwrap();
        prop_assert!((got - a.abs() * base).abs() <= 1e-9 * (1.0 + a.abs() * base + b.abs()));
    }

    #[test]
    fn mec_bounds_and_interior_points(pts in prop::collection::vec(point(), 2..30), t in 0.0..1.0f64) {
        let c = min_enclosing_circle(&pts).unwrap();
        let mut diameter: f64 = 0.0;
        for p in &pts {
            prop_assert!(p.distance(c.center) <= c.radius + 1e-9);
            for q in &pts {
                diameter = diameter.max(p.distance(*q));
            }
        }
        prop_assert!(c.radius >= diameter / 2.0 - 1e-9);
        prop_assert!(c.radius <= diameter + 1e-9);
        // a point between the center and a member lies inside
        let inner = Point2::new(c.center.x + t * (pts[0].x - c.center.x), c.center.y + t * (pts[0].y - c.center.y));
        let mut more = pts.clone();
        more.push(inner);
        prop_assert!((min_enclosing_circle(&more).unwrap().radius - c.radius).abs() <= 1e-9);
    }

    #[test]
    fn index_is_symmetric_and_bounded(a in circle(), b in circle()) {
        let ab = immersion_index(&a, &b);
        prop_assert_eq!(ab, immersion_index(&b, &a));
        prop_assert!((0.0..=100.0).contains(&ab));
    }

    #[test]
    fn lens_area_self_and_monotone(r1 in 0.01..5.0f64, r2 in 0.01..5.0f64, d1 in 0.0..12.0f64, d2 in 0.0..12.0f64) {
        let c = Circle::new(Point2::ORIGIN, r1);
        prop_assert_eq!(circle_intersection_area(&c, &c), PI * r1 * r1);
        let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let an = circle_intersection_area(&c, &Circle::new(Point2::new(near, 0.0), r2));
        let af = circle_intersection_area(&c, &Circle::new(Point2::new(far, 0.0), r2));
        prop_assert!(af <= an + 1e-12);
    }

    #[test]
    fn gyration_radius_ignores_scale(v in prop::collection::vec(0.05..5.0f64, 3..12), k in 0.01..100.0f64) {
        let a = radar_polygon(&v).unwrap().gyration_circle("a");
        let kv: Vec<f64> = v.iter().map(|x| k * x).collect();
        let b = radar_polygon(&kv).unwrap().gyration_circle("b");
        prop_assert!((a.radius() - b.radius()).abs() <= 1e-9);
        let (ca, cb) = (a.center(), b.center());
        prop_assert!((cb.x - k * ca.x).abs() <= 1e-12 * (1.0 + k));
        prop_assert!((cb.y - k * ca.y).abs() <= 1e-12 * (1.0 + k));
    }

    #[test]
    fn axis_order_follows_index_not_input(n in 3usize..8, rot in 0usize..8) {
        let specs: Vec<SubmetricSpec> = (0..n)
            .map(|i| SubmetricSpec::one_d(&format!("m{i}"), &format!("c{i}"), i))
            .collect();
        let mut shuffled = specs.clone();
        shuffled.rotate_left(rot % n);
        shuffled.reverse();
        prop_assert_eq!(order_specs(&shuffled).unwrap(), specs);
    }

    #[test]
    fn kinematics_round_trip(roll in -0.26..0.26f64, pitch in -0.26..0.26f64, heave in -0.05..0.05f64) {
        let cfg = PlatformConfig::default();
        let legs = inverse_kinematics(&PoseReference::new(roll, pitch, heave), &cfg).unwrap();
        let pose = forward_kinematics(&legs, &cfg).unwrap();
        let again = inverse_kinematics(&pose, &cfg).unwrap();
        for k in 0..3 {
            prop_assert!((legs[k] - again[k]).abs() <= 1e-9);
        }
    }

    #[test]
    fn boat_passthrough_is_idempotent(roll in finite(1.0), pitch in finite(1.0), heave in finite(0.2)) {
        let limits = PoseLimits::default();
        let once = boat_passthrough(roll, pitch, heave, &limits);
        prop_assert_eq!(boat_passthrough(once.roll, once.pitch, once.heave, &limits), once);
    }

    #[test]
    fn spearman_symmetric_and_bounded(pairs in prop::collection::vec((finite(5.0), finite(5.0)), 3..60)) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        if let Ok(r) = spearman(&x, &y) {
            prop_assert!(r.abs() <= 1.0);
            prop_assert_eq!(r, spearman(&y, &x).unwrap());
        }
    }
}
