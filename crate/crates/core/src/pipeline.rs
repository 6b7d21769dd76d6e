//! End-to-end commands: immersion index over condition traces, platform
//! simulation with correlation against the reference, and scenario
//! synthesis. Each writes its artefacts to an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::cueing::CueingMode;
use crate::error::{Error, Result};
use crate::geometry::{overlap, radar_polygon, GyrationCircle, Point2, RadarPolygon};
use crate::platform::{reference_channels, simulate};
use crate::submetrics::{evaluate_submetric, Preset, SubmetricValue, QUARTILE_RULE};
use crate::svg::{overlay_plot, radar_chart, OverlayPanel, RadarSeries};
use crate::synth::{generate_scenario, Condition, ScenarioSpec, SYNTHETIC_NOTE};
use crate::trace::{load_trace, schema_sidecar, MotionTrace, TraceSchema};
use crate::validation::{compare_traces, CorrelationReport};

pub const GENERATOR: &str = concat!("immersia ", env!("CARGO_PKG_VERSION"));

/// Loads a trace CSV with the configured schema, or its sidecar schema.
pub fn load_with_config(path: &Path, config: &AnalysisConfig) -> Result<MotionTrace> {
    let schema = match &config.schema {
        Some(p) => TraceSchema::load(p)?,
        None => {
            let sidecar = schema_sidecar(path);
            if !sidecar.is_file() {
                return Err(Error::Config(format!(
                    "no schema for {}: set `schema` in the config or provide {}",
                    path.display(),
                    sidecar.display()
                )));
            }
            TraceSchema::load(&sidecar)?
        }
    };
    Ok(load_trace(path, &schema)?.0)
}

/// A labelled input trace.
#[derive(Clone, Debug)]
pub struct LabelledTrace {
    pub label: String,
    pub trace: MotionTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisReport {
    pub index: usize,
    pub name: String,
    pub unit: String,
    pub dimensionality: u8,
    pub sources: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub label: String,
    pub is_reference: bool,
    pub values: Vec<SubmetricValue>,
    pub centroid: Point2,
    pub moment: f64,
    pub area: f64,
    pub radius: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub test: String,
    pub reference: String,
    pub distance: f64,
    pub intersection_area: f64,
    pub union_area: f64,
    pub index_percent: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexReport {
    pub generator: &'static str,
    pub quartile_rule: &'static str,
    pub reference: String,
    pub axes: Vec<AxisReport>,
    pub conditions: Vec<ConditionReport>,
    pub comparisons: Vec<ComparisonReport>,
    pub config: AnalysisConfig,
}

/// Everything computed for an index run; `report` is what gets serialised.
pub struct IndexAnalysis {
    pub report: IndexReport,
    pub polygons: Vec<RadarPolygon>,
    pub circles: Vec<GyrationCircle>,
}

impl IndexAnalysis {
    pub fn radar_svg(&self) -> String {
        let names: Vec<String> = self.report.axes.iter().map(|a| a.name.clone()).collect();
        let series: Vec<RadarSeries<'_>> = self
            .polygons
            .iter()
            .zip(&self.circles)
            .map(|(polygon, circle)| RadarSeries { polygon, circle })
            .collect();
        radar_chart(&names, &series)
    }

    pub fn index_of(&self, label: &str) -> Option<f64> {
        self.report
            .comparisons
            .iter()
            .find(|c| c.test == label)
            .map(|c| c.index_percent)
    }
}

/// Scores each condition against the reference.
pub fn index_analysis(
    config: &AnalysisConfig,
    reference: &LabelledTrace,
    conditions: &[LabelledTrace],
) -> Result<IndexAnalysis> {
    let specs = config.submetric_specs()?;
    let mut polygons = Vec::new();
    let mut circles = Vec::new();
    let mut reports = Vec::new();
    for (i, input) in std::iter::once(reference).chain(conditions).enumerate() {
        let trace = config.apply_derivations(&input.trace)?;
        let values = specs
            .iter()
            .map(|s| evaluate_submetric(&trace, s))
            .collect::<Result<Vec<_>>>()?;
        let poly = radar_polygon(&values.iter().map(|v| v.value).collect::<Vec<_>>())?;
        let circle = poly.gyration_circle(input.label.clone());
        reports.push(ConditionReport {
            label: input.label.clone(),
            is_reference: i == 0,
            values,
            centroid: circle.center(),
            moment: circle.moment,
            area: circle.area,
            radius: circle.radius(),
            degenerate: circle.degenerate,
        });
        polygons.push(poly);
        circles.push(circle);
    }

    let axes = specs
        .iter()
        .zip(&reports[0].values)
        .map(|(s, v)| AxisReport {
            index: s.axis_index,
            name: s.name.clone(),
            unit: v.unit.clone(),
            dimensionality: s.dimensionality,
            sources: s.sources.clone(),
        })
        .collect();

    let reference_circle = &circles[0];
    let comparisons = circles[1..]
        .iter()
        .map(|c| {
            let o = overlap(&c.circle, &reference_circle.circle);
            let mut flags = Vec::new();
            if reference_circle.degenerate {
                flags.push("reference polygon has zero area; circle collapsed to a point".into());
            }
            if c.degenerate {
                flags.push("test polygon has zero area; circle collapsed to a point".into());
            }
            ComparisonReport {
                test: c.label.clone(),
                reference: reference_circle.label.clone(),
                distance: o.distance,
                intersection_area: o.intersection_area,
                union_area: o.union_area,
                index_percent: o.index_percent,
                flags,
            }
        })
        .collect();

    Ok(IndexAnalysis {
        report: IndexReport {
            generator: GENERATOR,
            quartile_rule: QUARTILE_RULE,
            reference: reference.label.clone(),
            axes,
            conditions: reports,
            comparisons,
            config: config.clone(),
        },
        polygons,
        circles,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn submetric_table(values: &[SubmetricValue]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut s = String::from("name,unit,value,q1,q3,mec_x,mec_y\n");
    for v in values {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            v.name,
            v.unit,
            v.value,
            opt(v.q1),
            opt(v.q3),
            opt(v.mec_center.map(|c| c.x)),
            opt(v.mec_center.map(|c| c.y)),
        ));
    }
    s
}

/// Writes `index.json`, `radar.svg` and one `submetrics_<label>.csv` per
/// condition.
pub fn write_index_outputs(analysis: &IndexAnalysis, out_dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(out_dir)?;
    let mut written = Vec::new();
    for c in &analysis.report.conditions {
        let p = out_dir.join(format!("submetrics_{}.csv", c.label));
        write_text(&p, &submetric_table(&c.values))?;
        written.push(p);
    }
    let svg = out_dir.join("radar.svg");
    write_text(&svg, &analysis.radar_svg())?;
    written.push(svg);
    let json = out_dir.join("index.json");
    write_json(&json, &analysis.report)?;
    written.push(json);
    Ok(written)
}

fn stem_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into())
}

/// Labels from file stems, made unique with a numeric suffix.
fn unique_labels(paths: &[&Path]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(paths.len());
    for p in paths {
        let base = stem_label(p);
        let mut label = base.clone();
        let mut k = 2;
        while out.contains(&label) {
            label = format!("{base}_{k}");
            k += 1;
        }
        out.push(label);
    }
    out
}

/// `index` command: loads the traces, scores them and writes the outputs.
pub fn run_index(
    config: &AnalysisConfig,
    reference: &Path,
    conditions: &[PathBuf],
    out_dir: &Path,
) -> Result<IndexAnalysis> {
    if conditions.is_empty() {
        return Err(Error::Argument(
            "at least one condition trace is required".into(),
        ));
    }
    let mut paths: Vec<&Path> = vec![reference];
    paths.extend(conditions.iter().map(PathBuf::as_path));
    let labels = unique_labels(&paths);
    let mut traces = paths
        .iter()
        .zip(labels)
        .map(|(p, label)| {
            Ok(LabelledTrace {
                label,
                trace: load_with_config(p, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = traces.remove(0);
    let analysis = index_analysis(config, &reference, &traces)?;
    write_index_outputs(&analysis, out_dir)?;
    for c in &analysis.report.comparisons {
        log::info!("{} vs {}: {:.3}%", c.test, c.reference, c.index_percent);
    }
    Ok(analysis)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateReport {
    pub generator: &'static str,
    pub mode: CueingMode,
    pub reference: String,
    pub steps: usize,
    pub max_leg_speed: f64,
    pub leg_speed_limit: f64,
    pub correlation: CorrelationReport,
    pub config: AnalysisConfig,
}

/// Reference-vs-platform channel pairs compared for each mode.
pub fn tracking_pairs(mode: CueingMode) -> Vec<(&'static str, &'static str)> {
    match mode {
        CueingMode::SkiAccel => vec![("a_long", "imu_x"), ("a_lat", "imu_y")],
        CueingMode::BoatPose => vec![("roll", "roll"), ("pitch", "pitch"), ("heave", "heave")],
    }
}

/// Simulates the platform against `reference` and correlates the result.
pub fn simulate_and_compare(
    config: &AnalysisConfig,
    reference: &MotionTrace,
    mode: CueingMode,
) -> Result<(MotionTrace, SimulateReport)> {
    let run = simulate(reference, &config.platform, mode)?;
    let (a, b) = match config.correlation_window {
        Some([from, to]) => (reference.window(from, to)?, run.trace.window(from, to)?),
        None => (reference.clone(), run.trace.clone()),
    };
    let correlation = compare_traces(&a, &b, &tracking_pairs(mode), config.max_lag)?;
    let report = SimulateReport {
        generator: GENERATOR,
        mode,
        reference: String::new(),
        steps: run.steps,
        max_leg_speed: run.max_leg_speed,
        leg_speed_limit: config.platform.max_leg_velocity,
        correlation,
        config: config.clone(),
    };
    Ok((run.trace, report))
}

/// `simulate` command: writes `platform.csv`, `imu.csv`,
/// `correlation.json` and `tracking.svg`.
pub fn run_simulate(
    config: &AnalysisConfig,
    reference_path: &Path,
    out_dir: &Path,
) -> Result<SimulateReport> {
    let reference = load_with_config(reference_path, config)?;
    let mode = match config.resolved_mode() {
        Some(m) => m,
        None => infer_mode(&reference)?,
    };
    let (trace, mut report) = simulate_and_compare(config, &reference, mode)?;
    report.reference = stem_label(reference_path);

    ensure_dir(out_dir)?;
    trace
        .select(&[
            "roll",
            "pitch",
            "heave",
            "leg_1",
            "leg_2",
            "leg_3",
            "cmd_roll",
            "cmd_pitch",
            "cmd_heave",
        ])?
        .save(&out_dir.join("platform.csv"))?;
    trace
        .select(&["imu_x", "imu_y", "imu_z"])?
        .save(&out_dir.join("imu.csv"))?;
    write_json(&out_dir.join("correlation.json"), &report)?;

    let times = reference.times();
    let panels: Vec<OverlayPanel<'_>> = tracking_pairs(mode)
        .into_iter()
        .map(|(a, b)| {
            Ok(OverlayPanel {
                title: a.to_string(),
                reference_label: a.to_string(),
                measured_label: b.to_string(),
                reference: reference.values(a)?,
                measured: trace.values(b)?,
            })
        })
        .collect::<Result<_>>()?;
    write_text(
        &out_dir.join("tracking.svg"),
        &overlay_plot(&times, &panels),
    )?;
    for p in &report.correlation.pairs {
        match p.rho {
            Some(r) => log::info!("{} vs {}: rho {:.4} at lag {}", p.a, p.b, r, p.lag),
            None => log::info!("{} vs {}: rho undefined", p.a, p.b),
        }
    }
    Ok(report)
}

fn infer_mode(reference: &MotionTrace) -> Result<CueingMode> {
    for mode in [CueingMode::SkiAccel, CueingMode::BoatPose] {
        if reference_channels(mode)
            .iter()
            .all(|c| reference.channel(c).is_some())
        {
            return Ok(mode);
        }
    }
    Err(Error::Config(
        "cannot tell the cueing mode: reference has neither a_long/a_lat/a_vert nor roll/pitch/heave"
            .into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthManifest {
    pub generator: &'static str,
    pub note: &'static str,
    pub scenario: ScenarioSpec,
    pub files: Vec<String>,
}

/// The scenario a config asks for, with CLI-level overrides applied.
pub fn scenario_for(config: &AnalysisConfig, seed: Option<u64>) -> ScenarioSpec {
    let mut spec = config
        .scenario
        .clone()
        .unwrap_or_else(|| ScenarioSpec::new(config.preset.unwrap_or(Preset::Ski), 60.0, 0));
    if let Some(s) = seed {
        spec.seed = s;
    }
    spec
}

/// `synth` command: writes one CSV (plus schema sidecar) per condition and
/// the reference, and `scenario.json`.
pub fn run_synth(
    config: &AnalysisConfig,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<SynthManifest> {
    let spec = scenario_for(config, seed);
    let scenario = generate_scenario(&spec)?;
    ensure_dir(out_dir)?;
    let mut files = Vec::new();
    for c in Condition::ALL {
        let name = format!("{}.csv", c.label());
        scenario.condition(c).save(&out_dir.join(&name))?;
        files.push(name);
    }
    scenario.reference.save(&out_dir.join("reference.csv"))?;
    files.push("reference.csv".into());
    let manifest = SynthManifest {
        generator: GENERATOR,
        note: SYNTHETIC_NOTE,
        scenario: spec,
        files,
    };
    write_json(&out_dir.join("scenario.json"), &manifest)?;
    Ok(manifest)
}
