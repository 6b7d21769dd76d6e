//! Tracking fidelity between acceleration sources, measured with Spearman's
//! rank correlation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::{resample, MotionTrace};

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Argument(format!(
            "spearman inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Argument("spearman of non-finite data".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
        .ok_or_else(|| Error::UndefinedCorrelation("zero rank variance".into()))
}

/// One compared channel pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCorrelation {
    pub a: String,
    pub b: String,
    /// `None` when every candidate lag had zero rank variance.
    pub rho: Option<f64>,
    /// Positive when `b` lags `a`: `a[i]` is paired with `b[i + lag]`.
    pub lag: i64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub max_lag: usize,
    pub sample_rate: f64,
    pub pairs: Vec<PairCorrelation>,
}

/// Lags in search order: 0, -1, 1, -2, 2, ...
fn lag_order(max_lag: usize) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=max_lag as i64).flat_map(|l| [-l, l]))
}

/// Correlates channel pairs of `a` and `b`, searching lags within
/// `±max_lag` samples for the highest rho. `b` is resampled to `a`'s rate
/// when the rates differ; start times are aligned to the nearest sample.
pub fn compare_traces(
    a: &MotionTrace,
    b: &MotionTrace,
    pairs: &[(&str, &str)],
    max_lag: usize,
) -> Result<CorrelationReport> {
    let rate = a.sample_rate();
    let b = if b.sample_rate() != rate {
        resample(b, rate)?
    } else {
        b.clone()
    };
    let offset = ((b.start_time() - a.start_time()) * rate).round() as i64;
    let (na, nb) = (a.len() as i64, b.len() as i64);

    let mut out = Vec::with_capacity(pairs.len());
    for &(ca, cb) in pairs {
        let xa = a.values(ca)?;
        let xb = b.values(cb)?;
        let mut best: Option<(f64, i64, usize)> = None;
        let mut any_support = false;
        let mut widest = 0;
        for lag in lag_order(max_lag) {
            // a[i] <-> b[j], j = i + lag - offset
            let shift = lag - offset;
            let lo = 0.max(-shift);
            let hi = na.min(nb - shift);
            if hi - lo < 3 {
                continue;
            }
            any_support = true;
            let (lo, hi) = (lo as usize, hi as usize);
            let xs = &xa[lo..hi];
            let ys = &xb[(lo as i64 + shift) as usize..(hi as i64 + shift) as usize];
            widest = widest.max(xs.len());
            match spearman(xs, ys) {
                Ok(rho) => {
                    if best.is_none_or(|(r, _, _)| rho > r) {
                        best = Some((rho, lag, xs.len()));
                    }
                }
                Err(Error::UndefinedCorrelation(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if !any_support {
            return Err(Error::Argument(format!(
                "`{ca}` and `{cb}` have no overlapping support within ±{max_lag} samples"
            )));
        }
        out.push(match best {
            Some((rho, lag, samples)) => PairCorrelation {
                a: ca.into(),
                b: cb.into(),
                rho: Some(rho),
                lag,
                samples,
                note: None,
            },
            None => PairCorrelation {
                a: ca.into(),
                b: cb.into(),
                rho: None,
                lag: 0,
                samples: widest,
                note: Some("undefined: zero rank variance".into()),
            },
        });
    }
    Ok(CorrelationReport {
        max_lag,
        sample_rate: rate,
        pairs: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{Channel, ChannelKind};

    #[test]
    fn monotone_and_antitone() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&x, &[10.0, 20.0, 30.0, 40.0]).unwrap(), 1.0);
        assert_eq!(spearman(&x, &[40.0, 30.0, 20.0, 10.0]).unwrap(), -1.0);
    }

    #[test]
    fn tied_ranks_average() {
        assert_eq!(
            average_ranks(&[3.0, 1.0, 3.0, 2.0]),
            vec![3.5, 1.0, 3.5, 2.0]
        );
        assert_eq!(average_ranks(&[5.0; 3]), vec![2.0; 3]);
    }

    #[test]
    fn spearman_errors() {
        assert!(matches!(
            spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(matches!(
            spearman(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::InsufficientData { .. })
        ));
    }

    fn trace(rate: f64, start: f64, chans: &[(&str, Vec<f64>)]) -> MotionTrace {
        MotionTrace::new(
            start,
            rate,
            chans
                .iter()
                .map(|(n, v)| Channel::new(*n, ChannelKind::AccelerationMs2, v.clone()))
                .collect(),
        )
        .unwrap()
    }

    fn wiggle(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = i as f64 * 0.01;
                (2.1 * t).sin() + 0.4 * (7.3 * t).cos() + 0.1 * (19.0 * t).sin()
            })
            .collect()
    }

    #[test]
    fn self_comparison() {
        let tr = trace(
            100.0,
            0.0,
            &[
                ("x", wiggle(300)),
                ("y", wiggle(300).iter().map(|v| v * 2.0).collect()),
            ],
        );
        let rep = compare_traces(&tr, &tr, &[("x", "x"), ("y", "y")], 10).unwrap();
        for p in &rep.pairs {
            assert!((p.rho.unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(p.lag, 0);
        }
    }

    #[test]
    fn finds_constructed_delay() {
        let x = wiggle(400);
        let mut delayed = vec![x[0]; 5];
        delayed.extend_from_slice(&x[..395]);
        let a = trace(100.0, 0.0, &[("x", x)]);
        let b = trace(100.0, 0.0, &[("x", delayed)]);
        let rep = compare_traces(&a, &b, &[("x", "x")], 10).unwrap();
        assert_eq!(rep.pairs[0].lag, 5);
        assert!((rep.pairs[0].rho.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn start_time_offset_is_aligned() {
        let x = wiggle(300);
        let a = trace(100.0, 0.0, &[("x", x.clone())]);
        let b = trace(100.0, 0.5, &[("x", x[50..].to_vec())]);
        let rep = compare_traces(&a, &b, &[("x", "x")], 3).unwrap();
        assert_eq!(rep.pairs[0].lag, 0);
        assert!((rep.pairs[0].rho.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_signal_flagged() {
        let a = trace(100.0, 0.0, &[("x", vec![0.0; 50])]);
        let rep = compare_traces(&a, &a, &[("x", "x")], 2).unwrap();
        assert_eq!(rep.pairs[0].rho, None);
        assert!(rep.pairs[0].note.is_some());
    }

    #[test]
    fn disjoint_support_rejected() {
        let a = trace(100.0, 0.0, &[("x", wiggle(20))]);
        let b = trace(100.0, 10.0, &[("x", wiggle(20))]);
        assert!(matches!(
            compare_traces(&a, &b, &[("x", "x")], 5),
            Err(Error::Argument(_))
        ));
    }
}
