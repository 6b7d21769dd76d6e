//! Multi-channel motion time series: the data model, CSV ingestion against a
//! column-mapping schema, and uniform-grid resampling.
//!
//! Traces live on a uniform grid `t_i = start_time + i / sample_rate`. Input
//! files whose time column does not sit on that grid are linearly
//! interpolated onto it. Rows with missing or non-finite values are dropped
//! and counted, never imputed.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical quantity carried by a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    #[serde(rename = "position_m")]
    PositionM,
    #[serde(rename = "angle_rad")]
    AngleRad,
    #[serde(rename = "acceleration_ms2")]
    AccelerationMs2,
    #[serde(rename = "force_N")]
    ForceN,
    #[serde(rename = "dimensionless")]
    Dimensionless,
}

impl ChannelKind {
    pub fn unit(self) -> &'static str {
        match self {
            ChannelKind::PositionM => "m",
            ChannelKind::AngleRad => "rad",
            ChannelKind::AccelerationMs2 => "m/s^2",
            ChannelKind::ForceN => "N",
            ChannelKind::Dimensionless => "1",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChannelKind::PositionM => "position_m",
            ChannelKind::AngleRad => "angle_rad",
            ChannelKind::AccelerationMs2 => "acceleration_ms2",
            ChannelKind::ForceN => "force_N",
            ChannelKind::Dimensionless => "dimensionless",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub name: String,
    pub kind: ChannelKind,
    pub values: Vec<f64>,
}

impl Channel {
    pub fn new(name: impl Into<String>, kind: ChannelKind, values: Vec<f64>) -> Self {
        Channel {
            name: name.into(),
            kind,
            values,
        }
    }
}

/// A uniformly sampled set of equally long, uniquely named channels.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionTrace {
    start_time: f64,
    sample_rate: f64,
    channels: Vec<Channel>,
}

impl MotionTrace {
    pub fn new(start_time: f64, sample_rate: f64, channels: Vec<Channel>) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Argument(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if !start_time.is_finite() {
            return Err(Error::Argument("start time must be finite".into()));
        }
        let Some(first) = channels.first() else {
            return Err(Error::Argument("a trace needs at least one channel".into()));
        };
        let len = first.values.len();
        if len < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: len,
            });
        }
        let mut seen = HashSet::new();
        for ch in &channels {
            if !seen.insert(ch.name.as_str()) {
                return Err(Error::Argument(format!("duplicate channel `{}`", ch.name)));
            }
            if ch.values.len() != len {
                return Err(Error::Argument(format!(
                    "channel `{}` has {} samples, expected {len}",
                    ch.name,
                    ch.values.len()
                )));
            }
            if let Some(i) = ch.values.iter().position(|v| !v.is_finite()) {
                return Err(Error::Argument(format!(
                    "channel `{}` has a non-finite value at sample {i}",
                    ch.name
                )));
            }
        }
        Ok(MotionTrace {
            start_time,
            sample_rate,
            channels,
        })
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    /// Number of samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn duration(&self) -> f64 {
        (self.len() - 1) as f64 / self.sample_rate
    }

    pub fn time(&self, i: usize) -> f64 {
        grid_time(self.start_time, self.sample_rate, i)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    /// Values of a named channel, or a config error naming the missing channel.
    pub fn values(&self, name: &str) -> Result<&[f64]> {
        self.channel(name)
            .map(|c| c.values.as_slice())
            .ok_or_else(|| Error::Config(format!("missing channel `{name}`")))
    }

    /// Returns a copy with `channel` appended, or replacing a channel of the
    /// same name.
    pub fn with_channel(&self, channel: Channel) -> Result<Self> {
        let mut channels = self.channels.clone();
        match channels.iter_mut().find(|c| c.name == channel.name) {
            Some(slot) => *slot = channel,
            None => channels.push(channel),
        }
        MotionTrace::new(self.start_time, self.sample_rate, channels)
    }

    /// Keeps only the named channels, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<Self> {
        let channels = names
            .iter()
            .map(|n| {
                self.channel(n)
                    .cloned()
                    .ok_or_else(|| Error::Config(format!("missing channel `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        MotionTrace::new(self.start_time, self.sample_rate, channels)
    }

    /// Samples with `from <= t <= to`.
    pub fn window(&self, from: f64, to: f64) -> Result<Self> {
        let tol = 1e-9 / self.sample_rate;
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let t = self.time(i);
                t >= from - tol && t <= to + tol
            })
            .collect();
        let (Some(&lo), Some(&hi)) = (idx.first(), idx.last()) else {
            return Err(Error::Argument(format!(
                "window [{from}, {to}] contains no samples"
            )));
        };
        let channels = self
            .channels
            .iter()
            .map(|c| Channel::new(c.name.clone(), c.kind, c.values[lo..=hi].to_vec()))
            .collect();
        MotionTrace::new(self.time(lo), self.sample_rate, channels)
    }

    /// Writes the trace as CSV: a `t` column followed by one column per
    /// channel. Values use the shortest representation that parses back to
    /// the same `f64`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![TIME_COLUMN.to_string()];
        header.extend(self.channels.iter().map(|c| c.name.clone()));
        w.write_record(&header)?;
        let mut row = Vec::with_capacity(header.len());
        for i in 0..self.len() {
            row.clear();
            row.push(self.time(i).to_string());
            row.extend(self.channels.iter().map(|c| c.values[i].to_string()));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Writes `path` and a `<path>.schema.json` sidecar describing it.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file)?;
        TraceSchema::for_trace(self).save(&schema_sidecar(path))
    }
}

fn grid_time(start: f64, rate: f64, i: usize) -> f64 {
    start + i as f64 / rate
}

pub const TIME_COLUMN: &str = "t";

/// Path of the schema file written next to a trace CSV.
pub fn schema_sidecar(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".schema.json");
    PathBuf::from(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

/// Maps CSV columns onto named, typed channels and fixes the target rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSchema {
    #[serde(default = "default_time_column")]
    pub time_column: String,
    pub sample_rate: f64,
    pub columns: BTreeMap<String, ColumnSpec>,
}

fn default_time_column() -> String {
    TIME_COLUMN.to_string()
}

impl TraceSchema {
    /// The identity schema for a trace written by [`MotionTrace::write_csv`].
    pub fn for_trace(trace: &MotionTrace) -> Self {
        let columns = trace
            .channels
            .iter()
            .map(|c| {
                (
                    c.name.clone(),
                    ColumnSpec {
                        name: c.name.clone(),
                        kind: c.kind,
                        unit: Some(c.kind.unit().to_string()),
                    },
                )
            })
            .collect();
        TraceSchema {
            time_column: TIME_COLUMN.to_string(),
            sample_rate: trace.sample_rate,
            columns,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: TraceSchema = serde_json::from_str(text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    fn validate(&self) -> Result<()> {
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::Schema(format!(
                "sample_rate must be positive, got {}",
                self.sample_rate
            )));
        }
        if self.columns.is_empty() {
            return Err(Error::Schema("no columns mapped".into()));
        }
        let mut names = HashSet::new();
        for spec in self.columns.values() {
            if !names.insert(spec.name.as_str()) {
                return Err(Error::Schema(format!(
                    "channel name `{}` mapped twice",
                    spec.name
                )));
            }
        }
        Ok(())
    }
}

/// What happened to the input rows during ingestion.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IngestReport {
    pub rows_read: usize,
    /// 1-based data row numbers (header excluded) rejected for empty or
    /// non-finite values.
    pub dropped_rows: Vec<usize>,
    /// Whether any output sample had to be interpolated.
    pub interpolated: bool,
}

pub fn load_trace(path: &Path, schema: &TraceSchema) -> Result<(MotionTrace, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let out = parse_trace(file, schema)?;
    if !out.1.dropped_rows.is_empty() {
        log::info!(
            "{}: dropped {} row(s) with missing or non-finite values",
            path.display(),
            out.1.dropped_rows.len()
        );
    }
    Ok(out)
}

/// Parses CSV text against `schema`. Columns not named in the schema are
/// ignored; channel order follows the header.
pub fn parse_trace<R: Read>(
    reader: R,
    schema: &TraceSchema,
) -> Result<(MotionTrace, IngestReport)> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |col: &str| {
        headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| Error::Schema(format!("missing column `{col}`")))
    };
    let time_idx = find(&schema.time_column)?;
    for col in schema.columns.keys() {
        find(col)?;
    }
    // (csv index, spec) in header order
    let mapped: Vec<(usize, &ColumnSpec)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| schema.columns.get(h).map(|s| (i, s)))
        .collect();

    let mut report = IngestReport::default();
    let mut times = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_no, record) in rdr.records().enumerate() {
        let record = record?;
        let row_no = row_no + 1;
        report.rows_read += 1;
        let parse = |idx: usize, col: &str| -> Result<Option<f64>> {
            let field = record.get(idx).unwrap_or("");
            if field.is_empty() {
                return Ok(None);
            }
            let v: f64 = field.parse().map_err(|_| {
                Error::Ingestion(format!(
                    "row {row_no}, column `{col}`: `{field}` is not a number"
                ))
            })?;
            Ok(v.is_finite().then_some(v))
        };
        let Some(t) = parse(time_idx, &schema.time_column)? else {
            report.dropped_rows.push(row_no);
            continue;
        };
        let mut vals = Vec::with_capacity(mapped.len());
        let mut keep = true;
        for &(idx, _) in &mapped {
            match parse(idx, &headers[idx])? {
                Some(v) => vals.push(v),
                None => {
                    keep = false;
                    break;
                }
            }
        }
        if !keep {
            report.dropped_rows.push(row_no);
            continue;
        }
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(Error::Ingestion(format!(
                    "time is not strictly increasing at row {row_no} ({t} after {prev})"
                )));
            }
        }
        times.push(t);
        rows.push(vals);
    }
    if times.len() < 2 {
        return Err(Error::Ingestion(format!(
            "need at least 2 valid rows, got {}",
            times.len()
        )));
    }

    let rate = schema.sample_rate;
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let n = grid_len(span, rate)?;
    if n < 2 {
        return Err(Error::Ingestion(format!(
            "time span {span} s holds fewer than 2 samples at {rate} Hz"
        )));
    }
    let snap = 1e-6 / rate;
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(n); mapped.len()];
    let mut k = 0;
    let mut prev_tj = f64::NEG_INFINITY;
    for j in 0..n {
        let tj = grid_time(t0, rate, j);
        if tj <= prev_tj {
            return Err(Error::Ingestion(format!(
                "a {rate} Hz grid cannot be represented at t = {tj} s"
            )));
        }
        prev_tj = tj;
        while k + 1 < times.len() && times[k + 1] <= tj + snap {
            k += 1;
        }
        if (times[k] - tj).abs() <= snap {
            for (col, v) in columns.iter_mut().zip(&rows[k]) {
                col.push(*v);
            }
        } else {
            report.interpolated = true;
            let (ta, tb) = (times[k], times[k + 1]);
            let w = (tj - ta) / (tb - ta);
            for (c, col) in columns.iter_mut().enumerate() {
                col.push(lerp(rows[k][c], rows[k + 1][c], w));
            }
        }
    }
    if times.len() != n {
        report.interpolated = true;
    }
    let channels = mapped
        .iter()
        .zip(columns)
        .map(|(&(_, spec), values)| Channel::new(spec.name.clone(), spec.kind, values))
        .collect();
    Ok((MotionTrace::new(t0, rate, channels)?, report))
}

/// Upper bound on resampled trace length (a day at 1 kHz is 8.64e7).
pub const MAX_GRID_SAMPLES: usize = 100_000_000;

fn grid_len(span: f64, rate: f64) -> Result<usize> {
    let steps = (span * rate + 1e-6).floor();
    if !(steps.is_finite() && steps < MAX_GRID_SAMPLES as f64) {
        return Err(Error::Ingestion(format!(
            "{span} s at {rate} Hz exceeds {MAX_GRID_SAMPLES} samples"
        )));
    }
    Ok(steps as usize + 1)
}

fn lerp(a: f64, b: f64, w: f64) -> f64 {
    a + (b - a) * w
}

/// Linear interpolation onto a uniform grid at `rate`, starting at the
/// trace's start time. Samples that coincide with the source grid are copied
/// exactly.
pub fn resample(trace: &MotionTrace, rate: f64) -> Result<MotionTrace> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::Argument(format!(
            "resample rate must be positive, got {rate}"
        )));
    }
    let steps = (trace.duration() * rate + 1e-9).floor();
    if steps.is_nan() || steps >= MAX_GRID_SAMPLES as f64 {
        return Err(Error::Argument(format!(
            "resampling to {rate} Hz exceeds {MAX_GRID_SAMPLES} samples"
        )));
    }
    let n = steps as usize + 1;
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let last = trace.len() - 1;
    let positions: Vec<(usize, f64)> = (0..n)
        .map(|j| {
            let s = j as f64 * trace.sample_rate / rate;
            let k = s.floor();
            let frac = s - k;
            let k = k as usize;
            if frac < 1e-9 || k >= last {
                (k.min(last), 0.0)
            } else if frac > 1.0 - 1e-9 {
                (k + 1, 0.0)
            } else {
                (k, frac)
            }
        })
        .collect();
    let channels = trace
        .channels
        .iter()
        .map(|c| {
            let values = positions
                .iter()
                .map(|&(k, w)| {
                    if w == 0.0 {
                        c.values[k]
                    } else {
                        lerp(c.values[k], c.values[k + 1], w)
                    }
                })
                .collect();
            Channel::new(c.name.clone(), c.kind, values)
        })
        .collect();
    MotionTrace::new(trace.start_time, rate, channels)
}

pub type Point3 = [f64; 3];

/// Named 3D landmark trajectories, read from `<marker>_x`, `<marker>_y`,
/// `<marker>_z` position channels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MarkerSet {
    markers: BTreeMap<String, Vec<Point3>>,
}

impl MarkerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, positions: Vec<Point3>) {
        self.markers.insert(name.into(), positions);
    }

    pub fn from_trace(trace: &MotionTrace, names: &[&str]) -> Result<Self> {
        let mut set = MarkerSet::new();
        for &name in names {
            let axis = |a: &str| trace.values(&format!("{name}_{a}"));
            let (x, y, z) = (axis("x")?, axis("y")?, axis("z")?);
            let pts = (0..trace.len()).map(|i| [x[i], y[i], z[i]]).collect();
            set.insert(name, pts);
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&[Point3]> {
        self.markers
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Config(format!("missing marker `{name}`")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.markers.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversized_grid_rejected() {
        let schema = TraceSchema::from_json(
            r#"{"sample_rate": 1000.0, "columns": {"a": {"name": "a", "kind": "dimensionless"}}}"#,
        )
        .unwrap();
        for csv in [
            "t,a\n-1e308,1\n1e308,2\n",
            "t,a\n0,1\n1e9,2\n",
            "t,a\n1e17,1\n100000000000000064,2\n",
        ] {
            assert!(matches!(
                parse_trace(csv.as_bytes(), &schema),
                Err(Error::Ingestion(_))
            ));
        }
    }

    fn schema(rate: f64, cols: &[(&str, ChannelKind)]) -> TraceSchema {
        TraceSchema {
            time_column: "t".into(),
            sample_rate: rate,
            columns: cols
                .iter()
                .map(|&(c, k)| {
                    (
                        c.to_string(),
                        ColumnSpec {
                            name: c.to_string(),
                            kind: k,
                            unit: None,
                        },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn loads_uniform_csv() {
        let mut text = String::from("t,cog_x,cog_y\n");
        for i in 0..500 {
            let t = i as f64 / 100.0;
            text.push_str(&format!("{t},{},{}\n", t.sin(), t.cos()));
        }
        let s = schema(
            100.0,
            &[
                ("cog_x", ChannelKind::PositionM),
                ("cog_y", ChannelKind::PositionM),
            ],
        );
        let (trace, report) = parse_trace(text.as_bytes(), &s).unwrap();
        assert_eq!(trace.channels().len(), 2);
        assert_eq!(trace.len(), 500);
        assert!(report.dropped_rows.is_empty());
        assert!(!report.interpolated);
        assert_eq!(trace.values("cog_y").unwrap()[7], (0.07f64).cos());
    }

    #[test]
    fn fills_time_gap_by_interpolation() {
        let text = "t,v\n0,1\n0.01,2\n0.03,6\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        let (trace, report) = parse_trace(text.as_bytes(), &s).unwrap();
        assert_eq!(trace.len(), 4);
        let t = trace.times();
        for (a, b) in t.iter().zip([0.0, 0.01, 0.02, 0.03]) {
            assert!((a - b).abs() < 1e-12);
        }
        let v = trace.values("v").unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 2.0);
        assert!((v[2] - 4.0).abs() < 1e-12);
        assert_eq!(v[3], 6.0);
        assert!(report.interpolated);
    }

    #[test]
    fn drops_nan_rows() {
        let text = "t,v\n0,1\n0.01,NaN\n0.02,3\n0.03,4\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        let (trace, report) = parse_trace(text.as_bytes(), &s).unwrap();
        assert_eq!(report.dropped_rows, vec![2]);
        // the dropped row is re-filled by interpolation on the grid
        assert_eq!(trace.len(), 4);
        assert!((trace.values("v").unwrap()[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn drops_inf_and_empty_rows() {
        let text = "t,v\n0,1\n0.01,inf\n0.02,\n0.03,4\n0.04,5\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        let (_, report) = parse_trace(text.as_bytes(), &s).unwrap();
        assert_eq!(report.dropped_rows, vec![2, 3]);
    }

    #[test]
    fn missing_column_is_named() {
        let text = "t,a\n0,1\n1,2\n";
        let s = schema(1.0, &[("b", ChannelKind::Dimensionless)]);
        let err = parse_trace(text.as_bytes(), &s).unwrap_err();
        assert!(
            matches!(&err, Error::Schema(m) if m.contains("`b`")),
            "{err}"
        );
    }

    #[test]
    fn rejects_non_monotone_time() {
        let text = "t,v\n0,1\n0.02,2\n0.01,3\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        assert!(matches!(
            parse_trace(text.as_bytes(), &s),
            Err(Error::Ingestion(_))
        ));
    }

    #[test]
    fn rejects_single_valid_row() {
        let text = "t,v\n0,1\n0.01,nan\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        assert!(matches!(
            parse_trace(text.as_bytes(), &s),
            Err(Error::Ingestion(_))
        ));
    }

    #[test]
    fn rejects_garbage_number() {
        let text = "t,v\n0,1\n0.01,abc\n";
        let s = schema(100.0, &[("v", ChannelKind::Dimensionless)]);
        assert!(matches!(
            parse_trace(text.as_bytes(), &s),
            Err(Error::Ingestion(_))
        ));
    }

    #[test]
    fn resample_identity() {
        let values: Vec<f64> = (0..200)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 100.0).sin())
            .collect();
        let tr = MotionTrace::new(
            0.0,
            100.0,
            vec![Channel::new(
                "s",
                ChannelKind::Dimensionless,
                values.clone(),
            )],
        )
        .unwrap();
        let out = resample(&tr, 100.0).unwrap();
        assert_eq!(out.values("s").unwrap(), values.as_slice());
    }

    #[test]
    fn resample_ramp_midpoints() {
        let values: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let tr = MotionTrace::new(
            0.0,
            10.0,
            vec![Channel::new("r", ChannelKind::Dimensionless, values)],
        )
        .unwrap();
        let out = resample(&tr, 20.0).unwrap();
        assert_eq!(out.len(), 21);
        for (i, v) in out.values("r").unwrap().iter().enumerate() {
            assert!((v - out.time(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_rejects_bad_rate() {
        let tr = MotionTrace::new(
            0.0,
            10.0,
            vec![Channel::new(
                "r",
                ChannelKind::Dimensionless,
                vec![0.0, 1.0],
            )],
        )
        .unwrap();
        assert!(matches!(resample(&tr, 0.0), Err(Error::Argument(_))));
        assert!(matches!(resample(&tr, -5.0), Err(Error::Argument(_))));
    }

    #[test]
    fn trace_invariants_enforced() {
        let ch = |n: &str, v: Vec<f64>| Channel::new(n, ChannelKind::Dimensionless, v);
        assert!(MotionTrace::new(0.0, 0.0, vec![ch("a", vec![0.0, 1.0])]).is_err());
        assert!(MotionTrace::new(0.0, 1.0, vec![ch("a", vec![0.0])]).is_err());
        assert!(MotionTrace::new(
            0.0,
            1.0,
            vec![ch("a", vec![0.0, 1.0]), ch("a", vec![0.0, 1.0])]
        )
        .is_err());
        assert!(MotionTrace::new(
            0.0,
            1.0,
            vec![ch("a", vec![0.0, 1.0]), ch("b", vec![0.0, 1.0, 2.0])]
        )
        .is_err());
    }

    #[test]
    fn window_selects_inclusive_range() {
        let tr = MotionTrace::new(
            0.0,
            10.0,
            vec![Channel::new(
                "r",
                ChannelKind::Dimensionless,
                (0..11).map(f64::from).collect(),
            )],
        )
        .unwrap();
        let w = tr.window(0.2, 0.5).unwrap();
        assert_eq!(w.values("r").unwrap(), &[2.0, 3.0, 4.0, 5.0]);
        assert!((w.start_time() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn markers_from_channels() {
        let mk = |n: &str, v: f64| Channel::new(n, ChannelKind::PositionM, vec![v, v]);
        let tr = MotionTrace::new(
            0.0,
            1.0,
            vec![mk("hip_x", 1.0), mk("hip_y", 2.0), mk("hip_z", 3.0)],
        )
        .unwrap();
        let set = MarkerSet::from_trace(&tr, &["hip"]).unwrap();
        assert_eq!(set.get("hip").unwrap()[1], [1.0, 2.0, 3.0]);
        assert!(MarkerSet::from_trace(&tr, &["knee"]).is_err());
    }
}
