//! Pipelines behind the subcommands, and the run report they emit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use sfperc::estimators::{
    averaged_cc, connected_components, degree_histogram, hill_gamma, palm_cc_estimate, tail_ccdf, truncation_breakdown,
    TruncationParams,
};
use sfperc::estimators::degrees::default_k;
use sfperc::graph::build_graph_cell_with;
use sfperc::report::EstimatorRecord;
use sfperc::rng::derive_seed;
use sfperc::theory::{classify_regime, RegimeReport};
use sfperc::validation::{fast_suite, full_suite, Level, Outcome};
use sfperc::{build_graph, io, sample_ppp, sample_weights, BoxGeometry, Engine, PointSet, WeightVector, WeightedGraph};

use crate::config::ExperimentConfig;
use crate::Format;

pub type Error = Box<dyn std::error::Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Sample,
    Graph,
    Degrees,
    Tail,
    Cc,
    PalmCc,
    Components,
    Report,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::Sample => "sample",
            Stage::Graph => "graph",
            Stage::Degrees => "degrees",
            Stage::Tail => "tail",
            Stage::Cc => "cc",
            Stage::PalmCc => "palm-cc",
            Stage::Components => "components",
            Stage::Report => "report",
        }
    }
}

/// Seeds of every stage, derived from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub points: u64,
    pub weights: u64,
    pub edges: u64,
    pub palm: u64,
}

impl Seeds {
    pub fn new(master: u64) -> Self {
        Self {
            master,
            points: derive_seed(master, "points", 0),
            weights: derive_seed(master, "weights", 0),
            edges: derive_seed(master, "edges", 0),
            palm: derive_seed(master, "palm", 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub seeds: Seeds,
    pub regime: RegimeReport,
    pub records: Vec<EstimatorRecord>,
    pub artifacts: Vec<Artifact>,
    pub runtime_ms: f64,
}

struct Run<'a> {
    config: &'a ExperimentConfig,
    out: &'a Path,
    format: Format,
    seeds: Seeds,
    records: Vec<EstimatorRecord>,
    artifacts: Vec<Artifact>,
}

impl<'a> Run<'a> {
    fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
        let path = self.out.join(name);
        {
            let mut w = BufWriter::new(File::create(&path)?);
            body(&mut w)?;
            w.flush()?;
        }
        let data = std::fs::read(&path)?;
        let digest = Sha256::digest(&data);
        self.artifacts.push(Artifact {
            path: name.to_string(),
            bytes: data.len() as u64,
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
        Ok(())
    }

    fn record(&mut self, r: EstimatorRecord) {
        self.records.push(r);
    }

    fn sample(&mut self) -> Result<(PointSet, WeightVector), Error> {
        let c = self.config;
        let law = c.law()?;
        let (points, weights) = (self.seeds.points, self.seeds.weights);
        let geometry = c.geometry()?;
        let mut sampled = None;
        let r = EstimatorRecord::timed(
            "sample",
            json!({"intensity": c.model.intensity, "side": c.geometry.side, "dim": c.model.d}),
            &[("points", points), ("weights", weights)],
            || -> Result<_, sfperc::Error> {
                let ps = sample_ppp(geometry, c.model.intensity, points)?;
                let wv = sample_weights(&law, ps.len(), weights);
                let n = ps.len();
                sampled = Some((ps, wv));
                Ok((n, None))
            },
        )?;
        self.record(r);
        Ok(sampled.expect("set by the closure"))
    }

    fn graph(&mut self) -> Result<WeightedGraph, Error> {
        let (ps, wv) = self.sample()?;
        let c = self.config;
        let params = c.params()?;
        let edges = self.seeds.edges;
        let mut built = None;
        let r = EstimatorRecord::timed(
            "graph",
            json!({"engine": c.graph.engine, "alpha": c.model.alpha}),
            &[("edges", edges)],
            || -> Result<_, sfperc::Error> {
                let g = match (c.graph.engine, c.graph.cell_side) {
                    (Engine::CellThinned, Some(side)) => build_graph_cell_with(&ps, &wv, &params, edges, side)?,
                    (engine, _) => build_graph(&ps, &wv, &params, edges, engine)?,
                };
                let summary = json!({"vertices": g.len(), "edges": g.edge_count()});
                built = Some(g);
                Ok((summary, None))
            },
        )?;
        self.record(r);
        Ok(built.expect("set by the closure"))
    }

    fn degrees(&mut self, g: &WeightedGraph) -> Result<(), Error> {
        let hist = degree_histogram(g);
        let degrees = g.degrees();
        let mean = degrees.iter().sum::<usize>() as f64 / degrees.len().max(1) as f64;
        let r = EstimatorRecord::timed::<_, Error>("degree_histogram", json!({}), &[], || Ok((json!({"mean": mean, "histogram": &hist}), None)))?;
        self.record(r);
        match self.format {
            Format::Csv => self.write("degrees.csv", |mut w| Ok(io::write_histogram_csv(&mut w, &hist)?)),
            Format::Json => self.write("degrees.json", |w| Ok(serde_json::to_writer(w, &hist)?)),
        }
    }

    fn tail(&mut self, g: &WeightedGraph) -> Result<(), Error> {
        let degrees = g.degrees();
        let ccdf = tail_ccdf(&degrees);
        let k = self.config.degrees.k.unwrap_or_else(|| default_k(degrees.len()));
        let regime = classify_regime(&self.config.params()?);
        let mut warning = (!regime.has_finite_degrees())
            .then(|| format!("{:?} regime: degrees are not power-law distributed, the Hill estimate is not meaningful", regime.regime));
        let fit = hill_gamma(&degrees, k);
        let (value, stderr) = match &fit {
            Ok(f) => (serde_json::to_value(f)?, Some(f.stderr)),
            Err(e) => {
                warning = Some(warning.map_or(e.to_string(), |w| format!("{w}; {e}")));
                (Value::Null, None)
            }
        };
        let r = EstimatorRecord::timed::<_, Error>("hill_gamma", json!({"k": k, "gamma": regime.gamma}), &[], || Ok((value, stderr)))?
            .with_warning(warning);
        self.record(r);
        match self.format {
            Format::Csv => self.write("tail.csv", |mut w| Ok(io::write_tail_csv(&mut w, &ccdf)?)),
            Format::Json => self.write("tail.json", |w| {
                let rows: Vec<Value> = ccdf.iter().map(|(s, p)| json!({"s": s, "ccdf": p})).collect();
                Ok(serde_json::to_writer(w, &rows)?)
            }),
        }
    }

    fn cc(&mut self, g: &WeightedGraph) -> Result<(), Error> {
        let c = self.config;
        let side = c.geometry.side;
        let r = EstimatorRecord::timed::<_, Error>("averaged_cc", json!({"n": side}), &[], || Ok((averaged_cc(g, side), None)))?;
        self.record(r);
        let trunc = TruncationParams::new(c.cc.m, c.cc.delta)?;
        let r = EstimatorRecord::timed::<_, Error>("truncated_cc", json!({"m": trunc.m, "delta": trunc.delta}), &[], || {
            Ok((truncation_breakdown(g, &trunc)?, None))
        })?;
        self.record(r);
        Ok(())
    }

    fn palm(&mut self) -> Result<(), Error> {
        let c = self.config;
        let params = c.params()?;
        let geometry = BoxGeometry::new(c.model.d, c.palm.side.unwrap_or(c.geometry.side), c.geometry.topology)?;
        let seed = self.seeds.palm;
        let r = EstimatorRecord::timed::<_, Error>(
            "palm_cc_estimate",
            json!({"replicas": c.palm.replicas, "side": geometry.side()}),
            &[("palm", seed)],
            || {
                let est = palm_cc_estimate(&params, &geometry, c.palm.replicas, seed)?;
                let (lo, hi) = est.ci95();
                Ok((json!({"estimate": est, "ci95": [lo, hi]}), Some(est.stderr)))
            },
        )?;
        self.record(r);
        Ok(())
    }

    fn components(&mut self, g: &WeightedGraph) -> Result<(), Error> {
        let r = EstimatorRecord::timed::<_, Error>("connected_components", json!({}), &[], || {
            let comp = connected_components(g);
            Ok((json!({"count": comp.count(), "largest": comp.largest(), "vertices": g.len()}), None))
        })?;
        self.record(r);
        Ok(())
    }
}

pub fn command(stage: Stage, config: &ExperimentConfig, out: &Path, format: Format) -> Result<ExitCode, Error> {
    let start = Instant::now();
    std::fs::create_dir_all(out)?;
    let mut run = Run { config, out, format, seeds: Seeds::new(config.seed), records: Vec::new(), artifacts: Vec::new() };
    run.write("config.toml", |w| Ok(w.write_all(config.to_toml().as_bytes())?))?;
    match stage {
        Stage::Sample => {
            let (ps, wv) = run.sample()?;
            let law = config.law()?;
            run.write("points.jsonl", |mut w| Ok(io::write_points(&mut w, &ps, Some((&law, &wv)))?))?;
        }
        Stage::PalmCc => run.palm()?,
        _ => {
            let g = run.graph()?;
            match stage {
                Stage::Graph => run.write("graph.jsonl", |mut w| Ok(io::write_graph(&mut w, &g)?))?,
                Stage::Degrees => run.degrees(&g)?,
                Stage::Tail => run.tail(&g)?,
                Stage::Cc => run.cc(&g)?,
                Stage::Components => run.components(&g)?,
                _ => {
                    run.write("graph.jsonl", |mut w| Ok(io::write_graph(&mut w, &g)?))?;
                    run.degrees(&g)?;
                    run.tail(&g)?;
                    run.cc(&g)?;
                    run.components(&g)?;
                    run.palm()?;
                }
            }
        }
    }
    let report = RunReport {
        command: stage.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        seeds: run.seeds,
        regime: classify_regime(&config.params()?),
        records: run.records,
        artifacts: run.artifacts,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let text = serde_json::to_string_pretty(&report)?;
    std::fs::write(report_path(out, stage.name()), &text)?;
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

pub fn report_path(out: &Path, command: &str) -> PathBuf {
    out.join(format!("report-{command}.json"))
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    level: Level,
    seed: u64,
    passed: bool,
    outcomes: &'a [Outcome],
}

pub fn validate(config: &ExperimentConfig, out: &Path, level: Level, corrupt: bool) -> Result<ExitCode, Error> {
    let outcomes = match level {
        Level::Fast => fast_suite(config.seed, corrupt),
        Level::Full => full_suite(config.seed),
    };
    let passed = outcomes.iter().all(Outcome::passed);
    for o in &outcomes {
        println!("{}", o.summary());
    }
    std::fs::create_dir_all(out)?;
    let report = ValidationReport { level, seed: config.seed, passed, outcomes: &outcomes };
    std::fs::write(out.join("validation.json"), serde_json::to_string_pretty(&report)?)?;
    if passed {
        println!("validation passed");
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: BTreeMap<u32, &str> = outcomes.iter().filter(|o| !o.passed()).map(|o| (o.id, o.title.as_str())).collect();
        println!("validation failed: {failed:?}");
        Ok(ExitCode::from(2))
    }
}
