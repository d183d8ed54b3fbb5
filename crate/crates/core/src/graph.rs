//! Exact edge sampling for scale-free percolation in continuum space.
//!
//! Vertices `x, y` with weights `w_x, w_y` are joined with probability
//! `1 - exp(-w_x w_y / |x - y|^α)`. The indicator of the pair is the event
//! `U{x,y} < p`, where `U` comes from [`PairRandom`]; both engines evaluate the
//! same predicate through [`EdgeSampler`], so they produce the same edge set
//! bit for bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pointprocess::{BoxGeometry, CellGrid, PointSet, Topology};
use crate::rng::{PairRandom, PAIR_UNIFORM_MIN};
use crate::weights::{WeightLaw, WeightVector};

/// Model parameters; the edge-kernel prefactor is fixed to 1 (absorbed
/// into the intensity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: usize,
    pub alpha: f64,
    pub law: WeightLaw,
    pub intensity: f64,
}

impl ModelParams {
    pub fn new(d: usize, alpha: f64, law: WeightLaw, intensity: f64) -> Result<Self> {
        let p = Self { d, alpha, law, intensity };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(invalid("d", "dimension must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if !(self.intensity > 0.0 && self.intensity.is_finite()) {
            return Err(invalid("intensity", format!("must be positive, got {}", self.intensity)));
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        self.law.tau()
    }

    /// Degree-tail exponent `γ = α(τ - 1)/d`.
    pub fn gamma(&self) -> f64 {
        self.alpha * (self.law.tau() - 1.0) / self.d as f64
    }

    /// Parameters with the intensity replaced, e.g. to absorb an edge-kernel
    /// prefactor `s`: intensity `λ s^{d/α}`.
    pub fn with_intensity(&self, intensity: f64) -> Result<Self> {
        Self::new(self.d, self.alpha, self.law, intensity)
    }
}

/// `r^α` evaluated from the squared distance, with an integer fast path.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    half_alpha: f64,
    int_half_alpha: Option<i32>,
}

impl Kernel {
    pub fn new(alpha: f64) -> Self {
        let half = 0.5 * alpha;
        let int_half_alpha = (half.fract() == 0.0 && half <= 32.0).then_some(half as i32);
        Self { half_alpha: half, int_half_alpha }
    }

    /// `w_x w_y / r^α` from the weight product and `r²`; `+∞` at `r = 0`.
    #[inline(always)]
    pub fn exponent(&self, weight_product: f64, r2: f64) -> f64 {
        if r2 == 0.0 {
            return f64::INFINITY;
        }
        let r_alpha = match self.int_half_alpha {
            Some(k) => r2.powi(k),
            None => r2.powf(self.half_alpha),
        };
        weight_product / r_alpha
    }
}

#[inline(always)]
fn prob_from_exponent(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Edge indicator given the pair uniform and the kernel exponent.
#[inline(always)]
pub fn decide(u: f64, x: f64) -> bool {
    // 1 - e^{-x} < x, and the rounded value exceeds that by at most an ulp
    if u >= x * (1.0 + 1e-12) {
        return false;
    }
    u < prob_from_exponent(x)
}

/// Connection probability `1 - exp(-w_x w_y / r^α)`; equals 1 at `r = 0`.
pub fn edge_prob(w_x: f64, w_y: f64, r: f64, alpha: f64) -> f64 {
    prob_from_exponent(Kernel::new(alpha).exponent(w_x * w_y, r * r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Naive,
    #[default]
    CellThinned,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Engine::Naive),
            "cell" | "cell_thinned" => Ok(Engine::CellThinned),
            other => Err(invalid("engine", format!("unknown engine `{other}`"))),
        }
    }
}

/// Evaluates individual edge indicators without building a graph.
#[derive(Clone, Copy)]
pub struct EdgeSampler<'a> {
    points: &'a PointSet,
    weights: &'a [f64],
    kernel: Kernel,
    pair: PairRandom,
}

impl<'a> EdgeSampler<'a> {
    pub fn new(points: &'a PointSet, weights: &'a WeightVector, params: &ModelParams, edge_seed: u64) -> Result<Self> {
        params.validate()?;
        if points.len() != weights.len() {
            return Err(Error::Misaligned {
                points: points.len(),
                weights: weights.len(),
            });
        }
        if points.dim() != params.d {
            return Err(invalid("d", format!("point set has dimension {}, params say {}", points.dim(), params.d)));
        }
        if points.len() > u32::MAX as usize {
            return Err(invalid("points", "too many vertices"));
        }
        Ok(Self {
            points,
            weights: weights.values(),
            kernel: Kernel::new(params.alpha),
            pair: PairRandom::new(edge_seed),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline(always)]
    fn exponent(&self, i: usize, j: usize) -> f64 {
        let g = self.points.geometry();
        self.kernel
            .exponent(self.weights[i] * self.weights[j], g.dist2(self.points.point(i), self.points.point(j)))
    }

    /// Whether `{i, j}` is an edge. `i != j`.
    #[inline(always)]
    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        debug_assert_ne!(i, j);
        let u = self.pair.uniform(i as u32, j as u32);
        decide(u, self.exponent(i, j))
    }

    /// Sorted neighbor list of `i`, by a full scan.
    pub fn neighbors(&self, i: usize) -> Vec<u32> {
        (0..self.len())
            .filter(|&j| j != i && self.is_edge(i, j))
            .map(|j| j as u32)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    points: PointSet,
    weights: WeightVector,
    params: ModelParams,
    adjacency: Vec<Vec<u32>>,
    engine: Engine,
    edge_seed: u64,
}

impl WeightedGraph {
    /// Assembles a graph from explicit parts, checking the adjacency invariants.
    pub fn from_parts(
        points: PointSet,
        weights: WeightVector,
        params: ModelParams,
        adjacency: Vec<Vec<u32>>,
        engine: Engine,
        edge_seed: u64,
    ) -> Result<Self> {
        if points.len() != weights.len() || points.len() != adjacency.len() {
            return Err(Error::Misaligned {
                points: points.len(),
                weights: weights.len(),
            });
        }
        let g = Self { points, weights, params, adjacency, engine, edge_seed };
        g.check_invariants().map_err(|e| invalid("adjacency", e))?;
        Ok(g)
    }

    /// Graph on explicit vertices and edges, for tests and small examples.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let geometry = BoxGeometry::free(1, (n.max(1)) as f64)?;
        let half = 0.5 * n.max(1) as f64;
        let coords = (0..n).map(|i| -half + i as f64 + 0.5).collect::<Vec<_>>();
        let points = PointSet::from_coords(geometry, coords, 1.0, 0)?;
        let weights = WeightVector::from_values(vec![1.0; n], 0)?;
        let params = ModelParams::new(1, 2.0, WeightLaw::pareto(3.0)?, 1.0)?;
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(invalid("edges", format!("edge ({a}, {b}) out of range")));
            }
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Self::from_parts(points, weights, params, adjacency, Engine::Naive, 0)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn edge_seed(&self) -> u64 {
        self.edge_seed
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&(j as u32)).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            list.iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i, j as usize))
        })
    }

    /// Symmetry, sortedness, no self-loops, no duplicates.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (i, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("neighbor list of {i} is not strictly increasing"));
                }
            }
            for &j in list {
                let j = j as usize;
                if j == i {
                    return Err(format!("self-loop at {i}"));
                }
                if j >= self.adjacency.len() {
                    return Err(format!("neighbor {j} of {i} out of range"));
                }
                if self.adjacency[j].binary_search(&(i as u32)).is_err() {
                    return Err(format!("asymmetric adjacency: {j} in adj({i}) but {i} not in adj({j})"));
                }
            }
        }
        Ok(())
    }

    /// Test hook: drops one direction of the first edge, breaking symmetry.
    #[doc(hidden)]
    pub fn corrupt_adjacency(&mut self) -> bool {
        if let Some(i) = self.adjacency.iter().position(|l| !l.is_empty()) {
            self.adjacency[i].remove(0);
            true
        } else {
            false
        }
    }
}

fn check_inputs(ps: &PointSet, wv: &WeightVector) -> Result<()> {
    if ps.len() != wv.len() {
        return Err(Error::Misaligned {
            points: ps.len(),
            weights: wv.len(),
        });
    }
    Ok(())
}

/// All-pairs engine: evaluates every unordered pair. O(N²).
pub fn build_graph_naive(ps: &PointSet, wv: &WeightVector, params: &ModelParams, edge_seed: u64) -> Result<WeightedGraph> {
    check_inputs(ps, wv)?;
    let sampler = EdgeSampler::new(ps, wv, params, edge_seed)?;
    let n = ps.len();
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).filter(|&j| sampler.is_edge(i, j)).map(|j| j as u32).collect())
        .collect();
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    // lower neighbors arrive in increasing order, then the upper ones
    for (i, ups) in upper.iter().enumerate() {
        for &j in ups {
            adjacency[j as usize].push(i as u32);
        }
    }
    for (i, ups) in upper.into_iter().enumerate() {
        adjacency[i].extend(ups);
    }
    Ok(WeightedGraph {
        points: ps.clone(),
        weights: wv.clone(),
        params: *params,
        adjacency,
        engine: Engine::Naive,
        edge_seed,
    })
}

/// Cell-thinned engine with the default cell side (about 16 points per cell).
pub fn build_graph_cell(ps: &PointSet, wv: &WeightVector, params: &ModelParams, edge_seed: u64) -> Result<WeightedGraph> {
    let side = CellGrid::default_side(ps.geometry(), ps.intensity(), 16.0);
    build_graph_cell_with(ps, wv, params, edge_seed, side)
}

struct CellInfo<'a> {
    lattice: Vec<usize>,
    members: &'a [usize],
    max_weight: f64,
}

/// Cell-pair engine. A pair of cells is bounded by the largest weights in each
/// and the smallest inter-cell distance; the bound is used only to discard
/// pairs whose uniform already exceeds it, so the edge set is exactly the
/// naive one.
pub fn build_graph_cell_with(
    ps: &PointSet,
    wv: &WeightVector,
    params: &ModelParams,
    edge_seed: u64,
    cell_side: f64,
) -> Result<WeightedGraph> {
    check_inputs(ps, wv)?;
    let sampler = EdgeSampler::new(ps, wv, params, edge_seed)?;
    let grid = CellGrid::build(ps, cell_side)?;
    let geometry = ps.geometry();
    let weights = wv.values();
    let cells: Vec<CellInfo> = grid
        .cells()
        .map(|(key, members)| CellInfo {
            lattice: grid.lattice(key),
            members,
            max_weight: members.iter().map(|&i| weights[i]).fold(0.0, f64::max),
        })
        .collect();
    let kernel = Kernel::new(params.alpha);
    let slack = 1e-9 * (geometry.side() + 1.0);

    let per_cell: Vec<Vec<(u32, u32)>> = (0..cells.len())
        .into_par_iter()
        .map(|a| {
            let ca = &cells[a];
            let mut found = Vec::new();
            for cb in &cells[a..] {
                let same = std::ptr::eq(ca, cb);
                let r2 = if same { 0.0 } else { min_cell_dist2(&grid, geometry, &ca.lattice, &cb.lattice) };
                let r_safe = (r2.sqrt() - slack).max(0.0);
                let bound = kernel.exponent(ca.max_weight * cb.max_weight, r_safe * r_safe) * (1.0 + 1e-9);
                if bound < PAIR_UNIFORM_MIN {
                    continue;
                }
                for (ia, &i) in ca.members.iter().enumerate() {
                    let others = if same { &cb.members[ia + 1..] } else { cb.members };
                    for &j in others {
                        let u = sampler.pair.uniform(i as u32, j as u32);
                        if u >= bound {
                            continue;
                        }
                        if decide(u, sampler.exponent(i, j)) {
                            found.push(if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) });
                        }
                    }
                }
            }
            found
        })
        .collect();

    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); ps.len()];
    for (i, j) in per_cell.into_iter().flatten() {
        adjacency[i as usize].push(j);
        adjacency[j as usize].push(i);
    }
    adjacency.par_iter_mut().for_each(|l| l.sort_unstable());
    Ok(WeightedGraph {
        points: ps.clone(),
        weights: wv.clone(),
        params: *params,
        adjacency,
        engine: Engine::CellThinned,
        edge_seed,
    })
}

/// Smallest squared distance between two grid cells under the box topology.
fn min_cell_dist2(grid: &CellGrid, geometry: &BoxGeometry, a: &[usize], b: &[usize]) -> f64 {
    let n = geometry.side();
    let torus = geometry.topology() == Topology::Torus;
    a.iter()
        .zip(b)
        .map(|(&ka, &kb)| {
            let (a0, a1) = grid.axis_bounds(ka);
            let (b0, b1) = grid.axis_bounds(kb);
            let gap_at = |shift: f64| (b0 + shift - a1).max(a0 - b1 - shift).max(0.0);
            let g = if torus { gap_at(0.0).min(gap_at(n)).min(gap_at(-n)) } else { gap_at(0.0) };
            g * g
        })
        .sum()
}

pub fn build_graph(ps: &PointSet, wv: &WeightVector, params: &ModelParams, edge_seed: u64, engine: Engine) -> Result<WeightedGraph> {
    match engine {
        Engine::Naive => build_graph_naive(ps, wv, params, edge_seed),
        Engine::CellThinned => build_graph_cell(ps, wv, params, edge_seed),
    }
}

pub fn degree(g: &WeightedGraph, i: usize) -> usize {
    g.degree(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointprocess::sample_ppp;
    use crate::weights::sample_weights;
    use proptest::prelude::*;

    fn params(d: usize, alpha: f64, tau: f64) -> ModelParams {
        ModelParams::new(d, alpha, WeightLaw::pareto(tau).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn edge_prob_values() {
        let e1 = 1.0 - (-1.0f64).exp();
        assert!((edge_prob(2.0, 8.0, 2.0, 4.0) - e1).abs() < 1e-15);
        assert!((edge_prob(3.0, 3.0, 3.0, 2.0) - e1).abs() < 1e-15);
        assert!((edge_prob(1.5, 2.0, 3.0f64.powf(1.0 / 2.7), 2.7) - e1).abs() < 1e-14);
        assert_eq!(edge_prob(1.0, 1.0, 0.0, 2.0), 1.0);
        assert!(edge_prob(1.0, 1.0, 1e8, 2.0) < 1e-15);
        assert_eq!(edge_prob(2.0, 5.0, 1.3, 3.0), edge_prob(5.0, 2.0, 1.3, 3.0));
        let mut prev = 1.0;
        for k in 1..200 {
            let p = edge_prob(2.0, 3.0, 0.05 * k as f64, 2.5);
            assert!((0.0..=1.0).contains(&p));
            assert!(p < prev || p == 1.0);
            prev = p;
        }
    }

    #[test]
    fn decide_matches_threshold() {
        for k in 0..5000 {
            let x = 1e-6 * 1.01f64.powi(k);
            let p = prob_from_exponent(x);
            for u in [p * 0.999_999, p, p * 1.000_001, x, 0.5] {
                assert_eq!(decide(u, x), u < p, "x={x} u={u}");
            }
        }
    }

    #[test]
    fn params_gamma() {
        let p = params(2, 4.0, 2.5);
        assert_eq!(p.gamma(), 4.0 * 1.5 / 2.0);
        assert!(ModelParams::new(0, 1.0, WeightLaw::pareto(2.0).unwrap(), 1.0).is_err());
        assert!(ModelParams::new(1, 0.0, WeightLaw::pareto(2.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn two_vertices_forced_edge() {
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        let ps = PointSet::from_coords(g, vec![0.0, 0.0, 1.0, 0.0], 1.0, 0).unwrap();
        let wv = WeightVector::from_values(vec![1e4, 1e4], 0).unwrap();
        let p = params(2, 2.0, 2.5);
        assert!(edge_prob(1e4, 1e4, 1.0, 2.0) > 1.0 - 1e-12);
        for seed in 0..50 {
            let gr = build_graph_naive(&ps, &wv, &p, seed).unwrap();
            let u = PairRandom::new(seed).uniform(0, 1);
            assert_eq!(gr.has_edge(0, 1), u < edge_prob(1e4, 1e4, 1.0, 2.0));
            assert_eq!(gr.has_edge(0, 1), gr.has_edge(1, 0));
        }
    }

    #[test]
    fn three_vertices() {
        let g = BoxGeometry::free(1, 10.0).unwrap();
        let ps = PointSet::from_coords(g, vec![-1.0, 0.0, 2.0], 1.0, 0).unwrap();
        let wv = WeightVector::from_values(vec![1.0, 2.0, 1.5], 0).unwrap();
        let p = params(1, 2.0, 3.0);
        for seed in 0..20 {
            let gr = build_graph_naive(&ps, &wv, &p, seed).unwrap();
            assert!(gr.edge_count() <= 3);
            gr.check_invariants().unwrap();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let r = g.distance(ps.point(i), ps.point(j));
                let pij = edge_prob(wv.values()[i], wv.values()[j], r, 2.0);
                assert_eq!(gr.has_edge(i, j), PairRandom::new(seed).uniform(i as u32, j as u32) < pij);
            }
        }
    }

    #[test]
    fn misaligned_inputs_rejected() {
        let g = BoxGeometry::torus(2, 5.0).unwrap();
        let ps = sample_ppp(g, 1.0, 1).unwrap();
        let wv = WeightVector::from_values(vec![1.0; ps.len() + 1], 0).unwrap();
        let p = params(2, 4.0, 2.5);
        assert!(matches!(build_graph_naive(&ps, &wv, &p, 0), Err(Error::Misaligned { .. })));
        assert!(matches!(build_graph_cell(&ps, &wv, &p, 0), Err(Error::Misaligned { .. })));
    }

    #[test]
    fn empty_graph() {
        let g = BoxGeometry::torus(2, 5.0).unwrap();
        let ps = PointSet::from_coords(g, vec![], 1.0, 0).unwrap();
        let wv = WeightVector::from_values(vec![], 0).unwrap();
        let gr = build_graph_cell(&ps, &wv, &params(2, 4.0, 2.5), 3).unwrap();
        assert!(gr.is_empty());
        assert_eq!(gr.edge_count(), 0);
    }

    #[test]
    fn degree_handshake_and_triangle() {
        let t = WeightedGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(degree(&t, 0), 2);
        assert_eq!(degree(&t, 3), 0);
        assert_eq!(t.degrees().iter().sum::<usize>(), 2 * t.edge_count());
    }

    #[test]
    fn corrupted_adjacency_detected() {
        let mut t = WeightedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(t.check_invariants().is_ok());
        assert!(t.corrupt_adjacency());
        assert!(t.check_invariants().is_err());
    }

    #[test]
    fn engines_agree_on_varied_configs() {
        for (k, (d, topo, alpha, tau, n)) in [
            (1, Topology::Torus, 2.0, 3.0, 300.0),
            (2, Topology::Torus, 4.0, 2.5, 20.0),
            (2, Topology::FreeBoundary, 3.0, 1.8, 15.0),
            (3, Topology::Torus, 5.0, 2.2, 7.0),
            (2, Topology::Torus, 1.5, 2.5, 10.0),
            (2, Topology::Torus, 2.3, 3.3, 12.0),
        ]
        .into_iter()
        .enumerate()
        {
            let g = BoxGeometry::new(d, n, topo).unwrap();
            let ps = sample_ppp(g, 1.0, k as u64).unwrap();
            let p = params(d, alpha, tau);
            let wv = sample_weights(&p.law, ps.len(), 100 + k as u64);
            let naive = build_graph_naive(&ps, &wv, &p, 7).unwrap();
            for side in [0.5, 1.0, 3.0, n] {
                let cell = build_graph_cell_with(&ps, &wv, &p, 7, side).unwrap();
                assert_eq!(naive.adjacency(), cell.adjacency(), "config {k} cell side {side}");
            }
            naive.check_invariants().unwrap();
        }
    }

    #[test]
    fn monotone_in_weight() {
        let g = BoxGeometry::torus(2, 12.0).unwrap();
        let ps = sample_ppp(g, 1.0, 4).unwrap();
        let p = params(2, 3.0, 2.5);
        let wv = sample_weights(&p.law, ps.len(), 5);
        let base = build_graph_cell(&ps, &wv, &p, 11).unwrap();
        let mut heavier = wv.clone();
        heavier.values_mut()[0] *= 10.0;
        let boosted = build_graph_cell(&ps, &heavier, &p, 11).unwrap();
        for &j in base.neighbors(0) {
            assert!(boosted.has_edge(0, j as usize));
        }
        assert!(boosted.degree(0) >= base.degree(0));
    }

    #[test]
    fn pair_indicators_uncorrelated() {
        // fixed configuration, two fixed pairs, varying edge seed
        let g = BoxGeometry::free(1, 10.0).unwrap();
        let ps = PointSet::from_coords(g, vec![-2.0, -1.0, 1.0, 2.0], 1.0, 0).unwrap();
        let wv = WeightVector::from_values(vec![1.0, 1.0, 1.0, 1.0], 0).unwrap();
        let p = params(1, 2.0, 3.0);
        let seeds = 10_000;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for seed in 0..seeds {
            let s = EdgeSampler::new(&ps, &wv, &p, seed).unwrap();
            a.push(s.is_edge(0, 1) as u8 as f64);
            b.push(s.is_edge(2, 3) as u8 as f64);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let pexp = edge_prob(1.0, 1.0, 1.0, 2.0);
        let se = (pexp * (1.0 - pexp) / seeds as f64).sqrt();
        assert!((ma - pexp).abs() < 4.0 * se && (mb - pexp).abs() < 4.0 * se);
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / seeds as f64;
        let corr = cov / (ma * (1.0 - ma) * mb * (1.0 - mb)).sqrt();
        assert!(corr.abs() < 4.0 / (seeds as f64).sqrt(), "corr {corr}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn engine_equivalence_prop(seed in 0u64..1_000_000, d in 1usize..=3, alpha in 0.8f64..6.0, tau in 1.3f64..4.0) {
            let n = match d { 1 => 150.0, 2 => 14.0, _ => 6.0 };
            let g = BoxGeometry::torus(d, n).unwrap();
            let ps = sample_ppp(g, 1.0, seed).unwrap();
            let p = params(d, alpha, tau);
            let wv = sample_weights(&p.law, ps.len(), seed ^ 1);
            let a = build_graph_naive(&ps, &wv, &p, seed ^ 2).unwrap();
            let b = build_graph_cell(&ps, &wv, &p, seed ^ 2).unwrap();
            prop_assert_eq!(a.adjacency(), b.adjacency());
            prop_assert!(a.check_invariants().is_ok());
        }
    }
}
