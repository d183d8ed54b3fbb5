//! `sfperc`: sample scale-free percolation graphs in continuum space and run
//! estimators and validation checks on them.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sfperc::validation::Level;
use sfperc::{Engine, Topology};

use config::{ConfigError, ExperimentConfig};

/// Default output directory when neither `--out` nor the config sets one.
pub const OUT_ENV: &str = "SFPERC_OUT";

#[derive(Parser)]
#[command(name = "sfperc", version, about = "Scale-free percolation in continuum space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
pub struct Global {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: $SFPERC_OUT, then ./sfperc-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Format of tabular artifacts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long, global = true, help_heading = "Overrides")]
    d: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    alpha: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    intensity: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    tau: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    side: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    topology: Option<Topology>,
    #[arg(long, global = true, help_heading = "Overrides")]
    engine: Option<Engine>,
    #[arg(long, global = true, help_heading = "Overrides")]
    cell_side: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    k: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    m: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    delta: Option<f64>,
    #[arg(long, global = true, help_heading = "Overrides")]
    replicas: Option<usize>,
    #[arg(long, global = true, help_heading = "Overrides")]
    palm_side: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default, Debug)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample points and weights.
    Sample,
    /// Sample a graph and export it.
    Graph,
    /// Degree histogram.
    Degrees,
    /// Tail ccdf and Hill estimate of the degree exponent.
    Tail,
    /// Averaged and (m, δ)-truncated clustering coefficients.
    Cc,
    /// Palm estimate of the clustering coefficient of the origin.
    PalmCc,
    /// Connected components.
    Components,
    /// Run the validation suite.
    Validate {
        #[arg(long, default_value = "fast")]
        level: Level,
        /// Corrupt a sampled adjacency list before checking it.
        #[arg(long, hide = true)]
        corrupt_adjacency: bool,
    },
    /// Full pipeline: every estimator on one sampled graph.
    Report,
}

impl Global {
    fn resolve(&self) -> Result<(ExperimentConfig, PathBuf), ConfigError> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($flag:ident => $($field:tt)+) => {
                if let Some(v) = self.$flag {
                    c.$($field)+ = v.into();
                }
            };
        }
        set!(seed => seed);
        set!(d => model.d);
        set!(alpha => model.alpha);
        set!(intensity => model.intensity);
        set!(side => geometry.side);
        set!(topology => geometry.topology);
        set!(engine => graph.engine);
        set!(cell_side => graph.cell_side);
        set!(k => degrees.k);
        set!(m => cc.m);
        set!(delta => cc.delta);
        set!(replicas => palm.replicas);
        set!(palm_side => palm.side);
        if let Some(tau) = self.tau {
            c.model.weights = match c.model.weights {
                sfperc::weights::LawSpec::Pareto { .. } => sfperc::weights::LawSpec::Pareto { tau },
                sfperc::weights::LawSpec::ParetoWithSlowlyVarying { factor, .. } => {
                    sfperc::weights::LawSpec::ParetoWithSlowlyVarying { tau, factor }
                }
            };
        }
        if let Some(out) = &self.out {
            c.out = Some(out.clone());
        }
        let out = c
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("sfperc-out"));
        c.validate()?;
        Ok((c, out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (config, out) = match cli.global.resolve() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("invalid config: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Validate { level, corrupt_adjacency } => run::validate(&config, &out, level, corrupt_adjacency),
        Command::Sample => run::command(run::Stage::Sample, &config, &out, cli.global.format),
        Command::Graph => run::command(run::Stage::Graph, &config, &out, cli.global.format),
        Command::Degrees => run::command(run::Stage::Degrees, &config, &out, cli.global.format),
        Command::Tail => run::command(run::Stage::Tail, &config, &out, cli.global.format),
        Command::Cc => run::command(run::Stage::Cc, &config, &out, cli.global.format),
        Command::PalmCc => run::command(run::Stage::PalmCc, &config, &out, cli.global.format),
        Command::Components => run::command(run::Stage::Components, &config, &out, cli.global.format),
        Command::Report => run::command(run::Stage::Report, &config, &out, cli.global.format),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
