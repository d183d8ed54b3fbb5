//! The validation suite: engine equivalence, Campbell identities, degree
//! tails, regimes, clustering, truncation, and oracle equivalence.
//!
//! Every check is a pure function of its master seed.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimators::clustering::{self, averaged_cc, palm_cc_estimate, truncation_breakdown, TruncationParams};
use crate::estimators::components::{connected_components, flood_fill_labels};
use crate::estimators::{
    campbell_monte_carlo, hill_gamma, mean_sd, origin_degrees_within, quenched_conditional_degree, slivnyak_mecke_check,
    variance_with_se,
};
use crate::graph::{build_graph_cell, build_graph_naive, ModelParams, WeightedGraph};
use crate::pointprocess::{sample_ppp, BoxGeometry, Topology};
use crate::rng::{self, derive_seed};
use crate::theory::{
    annealed_degree_variance, annealed_mean_degree, c0, c1, campbell_check, classify_regime, Regime, StepFunction,
};
use crate::weights::{sample_weights, WeightLaw};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { label: label.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub runtime_ms: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One-line summary, e.g. `[PASS] 1 engine equivalence (1.2 s)`.
    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("[{verdict}] {} {} ({:.1} s)", self.id, self.title, self.runtime_ms / 1e3);
        for c in self.failures() {
            line.push_str(&format!("; {}: {}", c.label, c.detail));
        }
        line
    }
}

fn timed(id: u32, title: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Outcome {
    let start = Instant::now();
    let checks = f().unwrap_or_else(|e| vec![Check::new("error", false, e.to_string())]);
    Outcome { id, title: title.into(), checks, runtime_ms: start.elapsed().as_secs_f64() * 1e3 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    #[default]
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            other => Err(crate::error::invalid("level", format!("expected fast or full, got {other:?}"))),
        }
    }
}

fn model(d: usize, alpha: f64, tau: f64) -> Result<ModelParams> {
    ModelParams::new(d, alpha, WeightLaw::pareto(tau)?, 1.0)
}

fn sample_graph(params: &ModelParams, geometry: BoxGeometry, seed: u64, index: u64) -> Result<WeightedGraph> {
    let ps = sample_ppp(geometry, params.intensity, derive_seed(seed, "points", index))?;
    let wv = sample_weights(&params.law, ps.len(), derive_seed(seed, "weights", index));
    build_graph_cell(&ps, &wv, params, derive_seed(seed, "edges", index))
}

/// Cell-engine edge sets equal the naive ones on random configurations.
pub fn engine_equivalence(configs: usize, max_points: usize, seed: u64) -> Result<Vec<Check>> {
    let mut r = rng::stream(derive_seed(seed, "engine/configs", 0));
    let mut setups = Vec::with_capacity(configs);
    for k in 0..configs {
        let d = 1 + k % 3;
        let target = r.random_range(20.0..max_points as f64 * 0.85);
        let side = target.powf(1.0 / d as f64);
        let alpha = r.random_range(0.5 * d as f64..4.0 * d as f64);
        let tau = r.random_range(1.3..4.0);
        let topo = if r.random_bool(0.5) { Topology::Torus } else { Topology::FreeBoundary };
        setups.push((d, side, alpha, tau, topo));
    }
    let mismatches: Vec<String> = setups
        .par_iter()
        .enumerate()
        .map(|(k, &(d, side, alpha, tau, topo))| -> Result<Option<String>> {
            let params = model(d, alpha, tau)?;
            let geometry = BoxGeometry::new(d, side, topo)?;
            let ps = sample_ppp(geometry, 1.0, derive_seed(seed, "engine/points", k as u64))?;
            let wv = sample_weights(&params.law, ps.len(), derive_seed(seed, "engine/weights", k as u64));
            let es = derive_seed(seed, "engine/edges", k as u64);
            let a = build_graph_naive(&ps, &wv, &params, es)?;
            let b = build_graph_cell(&ps, &wv, &params, es)?;
            Ok((a.adjacency() != b.adjacency() || ps.len() > max_points)
                .then(|| format!("config {k} (d={d}, N={}, alpha={alpha:.3}, tau={tau:.3})", ps.len())))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(vec![Check::new(
        format!("{configs} configurations bit-identical"),
        mismatches.is_empty(),
        if mismatches.is_empty() { "all equal".to_string() } else { mismatches.join(", ") },
    )])
}

/// Z_w over PPP seeds for d=1, α=2, τ=3, λ=1, torus n=100, w=10.
fn campbell_samples(seeds: usize, seed: u64) -> Result<(ModelParams, BoxGeometry, Vec<f64>)> {
    let params = model(1, 2.0, 3.0)?;
    let geometry = BoxGeometry::torus(1, 100.0)?;
    let z = (0..seeds as u64)
        .into_par_iter()
        .map(|k| {
            let ps = sample_ppp(geometry, 1.0, derive_seed(seed, "campbell/points", k))?;
            Ok(quenched_conditional_degree(&ps, &params.law, params.alpha, 10.0, &[0.0]))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((params, geometry, z))
}

pub fn campbell_mean(seeds: usize, tolerance_se: f64, seed: u64, infinite_volume_clause: bool) -> Result<Vec<Check>> {
    let (params, geometry, z) = campbell_samples(seeds, seed)?;
    let (mean, sd) = mean_sd(&z);
    let se = sd / (seeds as f64).sqrt();
    let theory = annealed_mean_degree(&params, &geometry, 10.0);
    let mut checks = vec![Check::new(
        format!("mean Z_w over {seeds} seeds within {tolerance_se} SE of boxed integral"),
        (mean - theory).abs() <= tolerance_se * se,
        format!("mean {mean:.4} ± {se:.4}, boxed {theory:.4}, z = {:.2}", (mean - theory) / se),
    )];
    if infinite_volume_clause {
        let limit = params.intensity * c0(&params)? * 10f64.sqrt();
        let rel = (theory - limit).abs() / limit;
        checks.push(Check::new(
            "boxed integral within 1% of λ c0 w^(d/α)",
            rel <= 0.01,
            format!("boxed {theory:.4} vs {limit:.4}, relative gap {:.2}%", rel * 100.0),
        ));
    }
    Ok(checks)
}

pub fn campbell_variance(seeds: usize, seed: u64) -> Result<Vec<Check>> {
    let (params, geometry, z) = campbell_samples(seeds, seed)?;
    let (var, se) = variance_with_se(&z);
    let theory = annealed_degree_variance(&params, &geometry, 10.0);
    let (c0v, c1v) = (c0(&params)?, c1(&params)?);
    Ok(vec![
        Check::new(
            format!("variance of Z_w over {seeds} seeds within 4 SE of boxed integral"),
            (var - theory).abs() <= 4.0 * se,
            format!("variance {var:.4} ± {se:.4}, boxed {theory:.4}, z = {:.2}", (var - theory) / se),
        ),
        Check::new("c1 <= c0", c1v <= c0v, format!("c1 = {c1v:.6}, c0 = {c0v:.6}")),
    ])
}

/// Hill estimates on `seeds` torus graphs; passes when at least `need` land in `[lo, hi]`.
pub fn degree_tail(tau: f64, side: f64, seeds: usize, need: usize, band: (f64, f64), seed: u64) -> Result<Check> {
    let params = model(2, 4.0, tau)?;
    let geometry = BoxGeometry::torus(2, side)?;
    let mut estimates = Vec::with_capacity(seeds);
    for k in 0..seeds as u64 {
        let g = sample_graph(&params, geometry, derive_seed(seed, "tail", tau.to_bits()), k)?;
        let degrees = g.degrees();
        let kk = (degrees.len() as f64).sqrt().floor() as usize;
        estimates.push(hill_gamma(&degrees, kk)?.gamma_hat);
    }
    let inside = estimates.iter().filter(|&&e| e >= band.0 && e <= band.1).count();
    let list: Vec<String> = estimates.iter().map(|e| format!("{e:.3}")).collect();
    Ok(Check::new(
        format!("tau = {tau}: Hill estimate in [{}, {}] on >= {need} of {seeds} seeds", band.0, band.1),
        inside >= need,
        format!("gamma = {}, estimates [{}]", params.gamma(), list.join(", ")),
    ))
}

pub fn regime_examples() -> Result<Vec<Check>> {
    let cases = [
        (model(2, 1.5, 2.5)?, Regime::InfiniteDegreeA),
        (model(2, 1.5, 1.2)?, Regime::InfiniteDegreeA),
        (model(2, 4.0, 1.4)?, Regime::InfiniteDegreeB),
        (model(2, 4.0, 2.5)?, Regime::PowerLaw { gamma: 3.0 }),
    ];
    Ok(cases
        .iter()
        .map(|(p, want)| {
            let got = classify_regime(p).regime;
            Check::new(
                format!("d={}, alpha={}, tau={} classified", p.d, p.alpha, p.tau()),
                got == *want,
                format!("{got:?}"),
            )
        })
        .collect())
}

/// Mean over seeds of `D_0(2R)/D_0(R)` for an adjoined origin at d=2, α=1.5.
pub fn degree_growth(seeds: usize, seed: u64) -> Result<Vec<Check>> {
    let params = model(2, 1.5, 2.5)?;
    let geometry = BoxGeometry::torus(2, 80.0)?;
    let radii = [8.0, 16.0, 32.0];
    let per_seed = (0..seeds as u64)
        .into_par_iter()
        .map(|k| {
            let ps = sample_ppp(geometry, 1.0, derive_seed(seed, "growth/points", k))?;
            let wv = sample_weights(&params.law, ps.len() + 1, derive_seed(seed, "growth/weights", k));
            let w0 = wv.values()[ps.len()];
            let wv = crate::weights::WeightVector::from_values(wv.values()[..ps.len()].to_vec(), wv.seed())?;
            origin_degrees_within(&ps, &wv, &params, derive_seed(seed, "growth/edges", k), w0, &radii)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    for (a, r) in radii[..2].iter().enumerate() {
        let ratios: Vec<f64> = per_seed
            .iter()
            .filter(|d| d[a] > 0)
            .map(|d| d[a + 1] as f64 / d[a] as f64)
            .collect();
        let (mean, sd) = mean_sd(&ratios);
        checks.push(Check::new(
            format!("D0({})/D0({r}) averaged over {seeds} seeds exceeds 1.3", 2.0 * r),
            ratios.len() == seeds && mean > 1.3,
            format!("mean ratio {mean:.3} (sd {sd:.3}, {} usable seeds)", ratios.len()),
        ));
    }
    Ok(checks)
}

pub fn clustering_checks(replicas: usize, seeds: usize, sides: &[f64], seed: u64) -> Result<Vec<Check>> {
    let params = model(2, 4.0, 2.5)?;
    let palm = palm_cc_estimate(&params, &BoxGeometry::torus(2, 64.0)?, replicas, derive_seed(seed, "palm", 0))?;
    let (lo, hi) = palm.ci99();
    let mut checks = vec![Check::new(
        format!("Palm estimate over {replicas} replicas: 99% CI above 0"),
        lo > 0.0,
        format!("estimate {:.4}, 99% CI [{lo:.4}, {hi:.4}]", palm.estimate),
    )];
    let mut stats = Vec::new();
    for &n in sides {
        let geometry = BoxGeometry::torus(2, n)?;
        let values = (0..seeds as u64)
            .into_par_iter()
            .map(|k| Ok(averaged_cc(&sample_graph(&params, geometry, derive_seed(seed, "cc", n as u64), k)?, n)))
            .collect::<Result<Vec<f64>>>()?;
        stats.push(mean_sd(&values));
    }
    let decreasing = stats.windows(2).all(|w| w[1].1 < w[0].1);
    let listing: Vec<String> =
        sides.iter().zip(&stats).map(|(n, (m, s))| format!("n={n}: mean {m:.4}, sd {s:.5}")).collect();
    checks.push(Check::new(
        format!("sd of CC_n over {seeds} seeds strictly decreasing in n"),
        decreasing,
        listing.join("; "),
    ));
    let (mean, sd) = *stats.last().expect("at least one side");
    let combined = ((sd * sd) / seeds as f64 + palm.stderr * palm.stderr).sqrt();
    checks.push(Check::new(
        format!("mean CC_{} within 3 combined SE of the Palm estimate", sides.last().unwrap()),
        (mean - palm.estimate).abs() <= 3.0 * combined,
        format!("mean {mean:.4}, Palm {:.4}, combined SE {combined:.4}", palm.estimate),
    ));
    Ok(checks)
}

/// Envelope `c1 δ + c2 (δ m)^(d-α)` with constants fitted on a pilot run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub c1: f64,
    pub c2: f64,
    pub d: usize,
    pub alpha: f64,
}

impl Envelope {
    pub fn eval(&self, t: &TruncationParams) -> f64 {
        self.c1 * t.delta + self.c2 * (t.delta * t.m).powf(self.d as f64 - self.alpha)
    }
}

fn truncation_runs(
    params: &ModelParams,
    geometry: BoxGeometry,
    t: &TruncationParams,
    seeds: usize,
    seed: u64,
) -> Result<Vec<clustering::TruncationBreakdown>> {
    (0..seeds as u64)
        .into_par_iter()
        .map(|k| truncation_breakdown(&sample_graph(params, geometry, seed, k)?, t))
        .collect()
}

/// Constants from a pilot run, following the counting argument behind the
/// bound: since `CC ≤ 1`, the gap is at most the frame vertex count plus the
/// count of interior vertices linked outside their box, both over `λn^d`.
/// The first scales with δ, the second with `(δm)^(d-α)`; each constant is
/// the pilot mean plus four sd.
pub fn fit_envelope(params: &ModelParams, side: f64, pilot: &TruncationParams, seeds: usize, seed: u64) -> Result<Envelope> {
    let runs = truncation_runs(params, BoxGeometry::torus(params.d, side)?, pilot, seeds, seed)?;
    let volume = params.intensity * side.powi(params.d as i32);
    let near: Vec<f64> = runs.iter().map(|b| b.frame_vertices as f64 / volume + b.normalization.abs()).collect();
    let leak: Vec<f64> = runs.iter().map(|b| b.leak_vertices as f64 / volume).collect();
    let upper = |xs: &[f64]| {
        let (m, s) = mean_sd(xs);
        (m + 4.0 * s).max(0.0)
    };
    Ok(Envelope {
        c1: upper(&near) / pilot.delta,
        c2: upper(&leak) / (pilot.delta * pilot.m).powf(params.d as f64 - params.alpha),
        d: params.d,
        alpha: params.alpha,
    })
}

pub fn truncation_bound(pilot_seeds: usize, seeds: usize, side: f64, seed: u64) -> Result<Vec<Check>> {
    let params = model(2, 4.0, 2.5)?;
    let pilot = TruncationParams::new(16.0, 0.1)?;
    let env = fit_envelope(&params, side, &pilot, pilot_seeds, derive_seed(seed, "truncation/pilot", 0))?;
    let mut checks = Vec::new();
    for (k, t) in [TruncationParams::new(16.0, 0.2)?, TruncationParams::new(32.0, 0.1)?].iter().enumerate() {
        let runs = truncation_runs(
            &params,
            BoxGeometry::torus(2, side)?,
            t,
            seeds,
            derive_seed(seed, "truncation/fresh", k as u64),
        )?;
        let bound = env.eval(t);
        let worst = runs.iter().map(|b| b.gap()).fold(0.0, f64::max);
        let violations = runs.iter().filter(|b| b.gap() > bound).count();
        let volume = params.intensity * side * side;
        let leak = runs.iter().map(|b| b.leak_vertices as f64 / volume).fold(0.0, f64::max);
        let leak_bound = env.c2 * (t.delta * t.m).powf(params.d as f64 - params.alpha);
        checks.push(Check::new(
            format!("envelope dominates |CC_n - CC^(m,δ)_n| at m={}, δ={} on {seeds} seeds", t.m, t.delta),
            violations == 0,
            format!(
                "worst gap {worst:.5}, envelope {bound:.5} (c1 = {:.4}, c2 = {:.4}), {violations} violations; \
                 worst leaking fraction {leak:.5} vs c2 term {leak_bound:.5}",
                env.c1, env.c2
            ),
        ));
    }
    Ok(checks)
}

pub fn poisson_oracles(samples: usize, seeds: usize, seed: u64) -> Result<Vec<Check>> {
    let steps = [
        (StepFunction::indicator(1.0, 1.0)?, 0.5, "indicator of the unit ball"),
        (StepFunction::new(vec![1.0, 2.0], vec![1.0, 0.5])?, 0.25, "two-shell step"),
    ];
    let mut checks = Vec::new();
    for (k, (f, theta, name)) in steps.iter().enumerate() {
        let mc = campbell_monte_carlo(f, 2, 1.0, *theta, samples, derive_seed(seed, "oracle/campbell", k as u64))?;
        checks.push(Check::new(
            format!("Campbell {name}: mean, variance, log-MGF within 4 SE"),
            mc.max_z() <= 4.0,
            format!(
                "mean {:.4}/{:.4}, variance {:.4}/{:.4}, log-MGF {:.4}/{:.4}, max |z| {:.2}",
                mc.mean, mc.exact.mean, mc.variance, mc.exact.variance, mc.log_mgf, mc.exact.log_mgf, mc.max_z()
            ),
        ));
    }
    let closed = campbell_check(&StepFunction::indicator(1.0, 2.0)?, 2, 1.0, 1.0).log_mgf;
    let expect = std::f64::consts::PI * (2f64.exp() - 1.0);
    checks.push(Check::new(
        "closed-form log-MGF of 2·1{r<=1} at θ=1",
        (closed - expect).abs() <= 1e-12 * expect,
        format!("{closed:.10} vs π(e²-1) = {expect:.10}"),
    ));
    let sm = slivnyak_mecke_check(&BoxGeometry::torus(2, 100.0)?, 1.0, 1.0, seeds, derive_seed(seed, "oracle/slivnyak", 0))?;
    checks.push(Check::new(
        format!("isolated-point count over {seeds} seeds within 3 SE"),
        sm.z().abs() <= 3.0,
        format!("empirical {:.2} ± {:.2}, analytic {:.2}", sm.empirical, sm.stderr, sm.analytic),
    ));
    Ok(checks)
}

fn brute_triangles(g: &WeightedGraph) -> Vec<u64> {
    let n = g.len();
    let mut t = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                continue;
            }
            for k in j + 1..n {
                if g.has_edge(i, k) && g.has_edge(j, k) {
                    t[i] += 1;
                    t[j] += 1;
                    t[k] += 1;
                }
            }
        }
    }
    t
}

pub fn oracle_equivalence(graphs: usize, seed: u64) -> Result<Vec<Check>> {
    let mut r = rng::stream(derive_seed(seed, "oracle/graphs", 0));
    let (mut tri_bad, mut comp_bad) = (Vec::new(), Vec::new());
    for k in 0..graphs {
        let d = 1 + k % 2;
        let alpha = r.random_range(1.2 * d as f64..3.0 * d as f64);
        let tau = r.random_range(1.8..3.5);
        let side = r.random_range(40.0..160.0f64).powf(1.0 / d as f64);
        let params = model(d, alpha, tau)?;
        let mut g = sample_graph(&params, BoxGeometry::torus(d, side)?, derive_seed(seed, "oracle", 1), k as u64)?;
        if g.len() > 200 {
            let n = 200;
            let edges: Vec<(usize, usize)> = g.edges().filter(|&(i, j)| i < n && j < n).collect();
            g = WeightedGraph::from_edges(n, &edges)?;
        }
        if clustering::triangle_counts(&g) != brute_triangles(&g) {
            tri_bad.push(k);
        }
        if connected_components(&g).labels != flood_fill_labels(&g) {
            comp_bad.push(k);
        }
    }
    Ok(vec![
        Check::new(
            format!("triangle counts equal triple enumeration on {graphs} graphs"),
            tri_bad.is_empty(),
            format!("mismatched graphs {tri_bad:?}"),
        ),
        Check::new(
            format!("union-find labels equal flood fill on {graphs} graphs"),
            comp_bad.is_empty(),
            format!("mismatched graphs {comp_bad:?}"),
        ),
    ])
}

/// Symmetry, ordering and self-loop invariants of a sampled graph.
pub fn graph_invariants(g: &WeightedGraph) -> Check {
    match g.check_invariants() {
        Ok(()) => Check::new("adjacency symmetric, sorted, loop-free", true, format!("{} edges", g.edge_count())),
        Err(e) => Check::new("adjacency symmetric, sorted, loop-free", false, e),
    }
}

pub const TITLES: [&str; 9] = [
    "engine equivalence",
    "Campbell mean",
    "Campbell variance",
    "degree tail exponent",
    "regime classifier",
    "clustering positivity and self-averaging",
    "truncation bound",
    "Poisson process oracles",
    "oracle equivalence",
];

/// Runs one criterion of the full suite at its reference sizes.
pub fn criterion(id: u32, seed: u64) -> Outcome {
    let s = derive_seed(seed, "criterion", id as u64);
    let title = TITLES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    timed(id, title, || match id {
        1 => engine_equivalence(50, 2000, s),
        2 => campbell_mean(200, 3.0, s, true),
        3 => campbell_variance(500, s),
        4 => Ok(vec![
            degree_tail(2.5, 200.0, 5, 4, (2.6, 3.4), s)?,
            degree_tail(3.5, 200.0, 5, 4, (4.2, 5.8), s)?,
        ]),
        5 => {
            let mut c = regime_examples()?;
            c.extend(degree_growth(50, s)?);
            Ok(c)
        }
        6 => clustering_checks(500, 30, &[32.0, 64.0, 128.0], s),
        7 => truncation_bound(20, 50, 128.0, s),
        8 => poisson_oracles(10_000, 200, s),
        9 => oracle_equivalence(20, s),
        _ => Err(crate::error::invalid("criterion", format!("no criterion {id}"))),
    })
}

/// A quick gate: reduced-size versions of the cheaper checks, plus the
/// invariants of a freshly sampled graph (optionally corrupted first).
pub fn fast_suite(seed: u64, corrupt: bool) -> Vec<Outcome> {
    let s = |k: u64| derive_seed(seed, "fast", k);
    vec![
        timed(1, "engine equivalence", || engine_equivalence(12, 600, s(1))),
        timed(2, "Campbell mean", || campbell_mean(100, 4.0, s(2), false)),
        timed(3, "Campbell variance", || campbell_variance(300, s(3))),
        timed(5, "regime classifier", regime_examples),
        timed(8, "Poisson process oracles", || poisson_oracles(2000, 60, s(8))),
        timed(9, "oracle equivalence", || oracle_equivalence(10, s(9))),
        timed(10, "graph invariants", || {
            let params = model(2, 4.0, 2.5)?;
            let mut g = sample_graph(&params, BoxGeometry::torus(2, 30.0)?, s(10), 0)?;
            if corrupt {
                g.corrupt_adjacency();
            }
            Ok(vec![graph_invariants(&g)])
        }),
    ]
}

pub fn full_suite(seed: u64) -> Vec<Outcome> {
    (1..=9).map(|id| criterion(id, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes_and_detects_corruption() {
        let ok = fast_suite(1, false);
        for o in &ok {
            assert!(o.passed(), "{}", o.summary());
        }
        let bad = fast_suite(1, true);
        let last = bad.last().unwrap();
        assert!(!last.passed());
        assert!(last.summary().starts_with("[FAIL] 10"));
    }

    #[test]
    fn envelope_eval() {
        let e = Envelope { c1: 2.0, c2: 4.0, d: 2, alpha: 4.0 };
        let t = TruncationParams::new(10.0, 0.2).unwrap();
        assert!((e.eval(&t) - (0.4 + 4.0 / 4.0)).abs() < 1e-15);
    }
}
