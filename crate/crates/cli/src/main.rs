use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use immersia_core::config::AnalysisConfig;
use immersia_core::pipeline::{run_index, run_simulate, run_synth};
use immersia_core::submetrics::Preset;
use immersia_core::Error;

/// Immersion index from motion variability, and 3-DoF platform simulation.
#[derive(Parser)]
#[command(name = "immersia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score condition traces against a reference trace.
    Index {
        #[command(flatten)]
        common: Common,
        /// Reference (ground-truth) trace CSV.
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Condition trace CSV; repeat for several.
        #[arg(long = "cond", required = true)]
        conditions: Vec<PathBuf>,
    },
    /// Drive the simulated platform with a reference trace.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Reference acceleration (ski) or pose (boat) trace CSV.
        #[arg(long = "ref")]
        reference: PathBuf,
    },
    /// Generate a synthetic scenario.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Scenario length in seconds, when the config has no scenario.
        #[arg(long)]
        duration: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Analysis config JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: config `output_dir`, else ./out].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Ski,
    Boat,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Ski => Preset::Ski,
            PresetArg::Boat => Preset::Boat,
        }
    }
}

impl Common {
    fn load(&self) -> Result<(AnalysisConfig, PathBuf), Error> {
        let mut cfg = match &self.config {
            Some(p) => AnalysisConfig::load(p)?,
            None => AnalysisConfig::default(),
        };
        if let Some(p) = self.preset {
            let p = Preset::from(p);
            cfg.preset = Some(p);
            if let Some(s) = cfg.scenario.as_mut() {
                s.activity = p;
            }
        }
        if let Some(seed) = self.seed {
            cfg.platform.seed = seed;
            if let Some(s) = cfg.scenario.as_mut() {
                s.seed = seed;
            }
        }
        let out = self
            .out
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, out))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Index {
            common,
            reference,
            conditions,
        } => {
            let (cfg, out) = common.load()?;
            let a = run_index(&cfg, &reference, &conditions, &out)?;
            for c in &a.report.comparisons {
                println!("{}\t{:.4}", c.test, c.index_percent);
            }
            done(&out);
        }
        Command::Simulate { common, reference } => {
            let (cfg, out) = common.load()?;
            let r = run_simulate(&cfg, &reference, &out)?;
            for p in &r.correlation.pairs {
                match p.rho {
                    Some(rho) => println!("{}\t{}\t{:.4}\tlag {}", p.a, p.b, rho, p.lag),
                    None => println!("{}\t{}\tundefined", p.a, p.b),
                }
            }
            done(&out);
        }
        Command::Synth { common, duration } => {
            let (mut cfg, out) = common.load()?;
            if cfg.scenario.is_none() {
                let mut spec = immersia_core::pipeline::scenario_for(&cfg, common.seed);
                if let Some(d) = duration {
                    spec.duration_s = d;
                }
                cfg.scenario = Some(spec);
            }
            let m = run_synth(&cfg, None, &out)?;
            for f in &m.files {
                println!("{f}");
            }
            done(&out);
        }
    }
    Ok(())
}

fn done(out: &Path) {
    log::info!("outputs in {}", out.display());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("IMMERSIA_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
