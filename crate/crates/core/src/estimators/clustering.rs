//! Local, averaged, and (m, δ)-truncated clustering coefficients, and the
//! Palm estimate of the clustering coefficient of a typical vertex.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{EdgeSampler, ModelParams, WeightedGraph};
use crate::pointprocess::{sample_ppp, BoxGeometry, Topology};
use crate::rng::derive_seed;
use crate::weights::sample_weights;

use super::{mean_sd, pairwise_sum};

/// Size of the intersection of two sorted lists.
fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Number of triangles through each vertex. Each triangle `i < j < k` is found
/// once, from its lowest edge `(i, j)`.
pub fn triangle_counts(g: &WeightedGraph) -> Vec<u64> {
    let mut tri = vec![0u64; g.len()];
    for i in 0..g.len() {
        let ni = g.neighbors(i);
        for &j in ni.iter().filter(|&&j| j as usize > i) {
            let nj = g.neighbors(j as usize);
            // common neighbors above j
            let a = &ni[ni.partition_point(|&k| k <= j)..];
            let b = &nj[nj.partition_point(|&k| k <= j)..];
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        tri[i] += 1;
                        tri[j as usize] += 1;
                        tri[a[x] as usize] += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
    }
    tri
}

/// Triangles through `i`.
pub fn vertex_triangles(g: &WeightedGraph, i: usize) -> usize {
    let ni = g.neighbors(i);
    ni.iter().map(|&j| intersection_len(ni, g.neighbors(j as usize))).sum::<usize>() / 2
}

fn cc_from(triangles: f64, degree: usize) -> f64 {
    if degree < 2 {
        0.0
    } else {
        2.0 * triangles / (degree as f64 * (degree as f64 - 1.0))
    }
}

/// `CC(i) = 2Δ_i / (D_i (D_i - 1))`, zero when `D_i ≤ 1`.
pub fn local_cc(g: &WeightedGraph, i: usize) -> f64 {
    cc_from(vertex_triangles(g, i) as f64, g.degree(i))
}

/// Local clustering coefficients of every vertex.
pub fn local_cc_all(g: &WeightedGraph) -> Vec<f64> {
    let tri = triangle_counts(g);
    tri.iter().enumerate().map(|(i, &t)| cc_from(t as f64, g.degree(i))).collect()
}

fn in_centered_box(x: &[f64], n: f64) -> bool {
    x.iter().all(|c| c.abs() <= 0.5 * n)
}

/// Mean local clustering over the vertices in the centered box of side `n`;
/// zero when that box holds no vertex.
pub fn averaged_cc(g: &WeightedGraph, n: f64) -> f64 {
    averaged_from(g, &local_cc_all(g), n)
}

fn averaged_from(g: &WeightedGraph, ccs: &[f64], n: f64) -> f64 {
    let inside: Vec<f64> = (0..g.len())
        .filter(|&i| in_centered_box(g.points().point(i), n))
        .map(|i| ccs[i])
        .collect();
    if inside.is_empty() {
        0.0
    } else {
        pairwise_sum(&inside) / inside.len() as f64
    }
}

/// Mesoscopic box side `m` and frame fraction `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub m: f64,
    pub delta: f64,
}

impl TruncationParams {
    pub fn new(m: f64, delta: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(invalid("m", format!("box side must be positive, got {m}")));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(invalid("delta", format!("must lie in (0, 1/2), got {delta}")));
        }
        Ok(Self { m, delta })
    }

    fn check_against(&self, geometry: &BoxGeometry) -> Result<()> {
        let n = geometry.side();
        if self.m >= n {
            return Err(invalid("m", format!("box side {} must be below n = {n}", self.m)));
        }
        if geometry.topology() == Topology::Torus {
            let q = n / self.m;
            if (q - q.round()).abs() > 1e-9 {
                return Err(invalid("m", format!("on the torus n / m must be an integer, got {q}")));
            }
        }
        Ok(())
    }
}

/// Tiling of space by m-boxes, one centered at the origin.
struct BoxTiling {
    m: f64,
    frame: f64,
    wrap: Option<i64>,
}

impl BoxTiling {
    fn new(trunc: &TruncationParams, geometry: &BoxGeometry) -> Self {
        let wrap = (geometry.topology() == Topology::Torus).then(|| (geometry.side() / trunc.m).round() as i64);
        Self {
            m: trunc.m,
            frame: trunc.delta * trunc.m,
            wrap,
        }
    }

    fn index(&self, c: f64) -> i64 {
        let k = (c / self.m).round() as i64;
        match self.wrap {
            Some(q) => k.rem_euclid(q),
            None => k,
        }
    }

    fn same_box(&self, x: &[f64], y: &[f64]) -> bool {
        x.iter().zip(y).all(|(a, b)| self.index(*a) == self.index(*b))
    }

    /// Within `δm` of the complement of its box.
    fn in_frame(&self, x: &[f64]) -> bool {
        x.iter().any(|&c| {
            let offset = (c - (c / self.m).round() * self.m).abs();
            0.5 * self.m - offset <= self.frame
        })
    }
}

/// Decomposition of `CC_n - ĈC^{m,δ}_n` into its three sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationBreakdown {
    pub cc_n: f64,
    pub cc_truncated: f64,
    /// `CC_n - (λn^d)^{-1} Σ CC(x)`: the count-vs-volume normalization.
    pub normalization: f64,
    /// `(λn^d)^{-1} Σ_{frame} CC(x)`.
    pub frame: f64,
    /// `(λn^d)^{-1} Σ_{interior, linked outside its box} CC(x)`.
    pub leak: f64,
    pub vertices: usize,
    /// Vertices in the δ-frame of their box.
    pub frame_vertices: usize,
    /// Interior vertices with a neighbor outside their box.
    pub leak_vertices: usize,
}

impl TruncationBreakdown {
    pub fn gap(&self) -> f64 {
        (self.cc_n - self.cc_truncated).abs()
    }
}

/// `ĈC^{m,δ}_n = (λn^d)^{-1} Σ_{x∈V_n} ĈC(x)`, where `ĈC(x)` is `CC(x)` unless
/// `x` lies in the δ-frame of its m-box or has a neighbor outside that box.
pub fn truncated_cc(g: &WeightedGraph, trunc: &TruncationParams) -> Result<f64> {
    Ok(truncation_breakdown(g, trunc)?.cc_truncated)
}

pub fn truncation_breakdown(g: &WeightedGraph, trunc: &TruncationParams) -> Result<TruncationBreakdown> {
    let geometry = g.points().geometry();
    trunc.check_against(geometry)?;
    let tiling = BoxTiling::new(trunc, geometry);
    let ccs = local_cc_all(g);
    let volume = g.points().intensity() * geometry.volume();
    let (mut kept, mut frame, mut leak) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &cc) in ccs.iter().enumerate() {
        let x = g.points().point(i);
        if tiling.in_frame(x) {
            frame.push(cc);
        } else if g.neighbors(i).iter().any(|&j| !tiling.same_box(x, g.points().point(j as usize))) {
            leak.push(cc);
        } else {
            kept.push(cc);
        }
    }
    let total = pairwise_sum(&ccs);
    let cc_n = if ccs.is_empty() { 0.0 } else { total / ccs.len() as f64 };
    Ok(TruncationBreakdown {
        cc_n,
        cc_truncated: pairwise_sum(&kept) / volume,
        normalization: cc_n - total / volume,
        frame: pairwise_sum(&frame) / volume,
        leak: pairwise_sum(&leak) / volume,
        vertices: ccs.len(),
        frame_vertices: frame.len(),
        leak_vertices: leak.len(),
    })
}

/// Monte Carlo estimate of the Palm expectation of `CC(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub replicas: usize,
    /// Fraction of replicas with `CC(0) = 1`.
    pub clique_fraction: f64,
    /// Fraction of replicas with `D_0 ≤ 1`.
    pub degenerate_fraction: f64,
}

impl PalmEstimate {
    pub fn ci(&self, z: f64) -> (f64, f64) {
        (self.estimate - z * self.stderr, self.estimate + z * self.stderr)
    }

    pub fn ci95(&self) -> (f64, f64) {
        self.ci(1.959_963_984_540_054)
    }

    pub fn ci99(&self) -> (f64, f64) {
        self.ci(2.575_829_303_548_901)
    }
}

/// `CC(0)` for one Palm replica: PPP on `geometry`, origin adjoined as the
/// last vertex with an independent weight.
pub fn palm_replica(params: &ModelParams, geometry: &BoxGeometry, seed: u64, replica: u64) -> Result<f64> {
    let ps = sample_ppp(*geometry, params.intensity, derive_seed(seed, "palm/points", replica))?;
    let wv = sample_weights(&params.law, ps.len() + 1, derive_seed(seed, "palm/weights", replica));
    let ps0 = ps.with_point(&vec![0.0; geometry.dim()])?;
    let sampler = EdgeSampler::new(&ps0, &wv, params, derive_seed(seed, "palm/edges", replica))?;
    Ok(origin_cc(&sampler, ps.len()))
}

/// Local clustering of vertex `v` evaluated edge by edge: the same indicators
/// a full graph build would produce, restricted to `v`'s neighborhood.
pub fn origin_cc(sampler: &EdgeSampler<'_>, v: usize) -> f64 {
    let nbrs = sampler.neighbors(v);
    let mut closed = 0usize;
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            if sampler.is_edge(x as usize, y as usize) {
                closed += 1;
            }
        }
    }
    cc_from(closed as f64, nbrs.len())
}

/// Mean of `CC(0)` over `replicas` independent Palm samples, with a normal
/// interval.
pub fn palm_cc_estimate(params: &ModelParams, geometry: &BoxGeometry, replicas: usize, seed: u64) -> Result<PalmEstimate> {
    if replicas < 2 {
        return Err(invalid("replicas", "need at least two replicas"));
    }
    let values: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| palm_replica(params, geometry, seed, r))
        .collect::<Result<_>>()?;
    let (estimate, sd) = mean_sd(&values);
    let n = replicas as f64;
    Ok(PalmEstimate {
        estimate,
        stderr: sd / n.sqrt(),
        replicas,
        clique_fraction: values.iter().filter(|&&v| v == 1.0).count() as f64 / n,
        degenerate_fraction: values.iter().filter(|&&v| v == 0.0).count() as f64 / n,
    })
}

/// Clustering summary for one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CCReport {
    pub n: f64,
    pub cc_n: f64,
    pub cc_truncated: f64,
    pub m: f64,
    pub delta: f64,
    pub palm: Option<PalmEstimate>,
}

impl CCReport {
    pub fn new(g: &WeightedGraph, trunc: &TruncationParams, palm: Option<PalmEstimate>) -> Result<Self> {
        let b = truncation_breakdown(g, trunc)?;
        Ok(Self {
            n: g.points().geometry().side(),
            cc_n: b.cc_n,
            cc_truncated: b.cc_truncated,
            m: trunc.m,
            delta: trunc.delta,
            palm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph_cell;
    use crate::pointprocess::PointSet;
    use crate::rng;
    use crate::weights::{WeightLaw, WeightVector};
    use rand::Rng;

    fn k4_plus_path() -> WeightedGraph {
        WeightedGraph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn local_cases() {
        let g = k4_plus_path();
        for v in 0..4 {
            assert_eq!(local_cc(&g, v), 1.0);
        }
        assert_eq!(local_cc(&g, 5), 0.0);
        assert_eq!(local_cc(&g, 4), 0.0);
        // triangle with a pendant vertex on vertex 0
        let t = WeightedGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        assert!((local_cc(&t, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(local_cc(&t, 1), 1.0);
    }

    #[test]
    fn averaged_cases() {
        let g = k4_plus_path();
        assert!((averaged_cc(&g, 7.0) - 4.0 / 7.0).abs() < 1e-15);
        let empty = WeightedGraph::from_edges(0, &[]).unwrap();
        assert_eq!(averaged_cc(&empty, 1.0), 0.0);
        let tris = WeightedGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(averaged_cc(&tris, 6.0), 1.0);
    }

    fn brute_triangles(g: &WeightedGraph) -> Vec<u64> {
        let n = g.len();
        let mut t = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k) {
                        t[i] += 1;
                        t[j] += 1;
                        t[k] += 1;
                    }
                }
            }
        }
        t
    }

    #[test]
    fn triangles_match_brute_force() {
        let mut r = rng::stream(11);
        for case in 0..10 {
            let n = 30 + case * 15;
            let p = 0.05 + 0.03 * case as f64;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if r.random::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let brute = brute_triangles(&g);
            assert_eq!(triangle_counts(&g), brute);
            for (v, &t) in brute.iter().enumerate() {
                assert_eq!(vertex_triangles(&g, v) as u64, t);
                let cc = local_cc(&g, v);
                assert!((0.0..=1.0).contains(&cc));
                let d = g.degree(v) as u64;
                assert!(2 * t <= d * d.saturating_sub(1));
            }
        }
    }

    fn sample_graph(n: f64, topo: Topology, seed: u64) -> WeightedGraph {
        let geometry = BoxGeometry::new(2, n, topo).unwrap();
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let ps = sample_ppp(geometry, 1.0, seed).unwrap();
        let wv = sample_weights(&params.law, ps.len(), seed + 1);
        build_graph_cell(&ps, &wv, &params, seed + 2).unwrap()
    }

    #[test]
    fn truncation_params_rejected() {
        assert!(TruncationParams::new(4.0, 0.0).is_err());
        assert!(TruncationParams::new(4.0, 0.5).is_err());
        assert!(TruncationParams::new(-1.0, 0.1).is_err());
        let g = sample_graph(16.0, Topology::Torus, 1);
        assert!(truncated_cc(&g, &TruncationParams::new(16.0, 0.1).unwrap()).is_err());
        assert!(truncated_cc(&g, &TruncationParams::new(5.0, 0.1).unwrap()).is_err());
        assert!(truncated_cc(&g, &TruncationParams::new(4.0, 0.1).unwrap()).is_ok());
    }

    #[test]
    fn truncation_decomposition_adds_up() {
        for topo in [Topology::Torus, Topology::FreeBoundary] {
            let g = sample_graph(32.0, topo, 5);
            let b = truncation_breakdown(&g, &TruncationParams::new(8.0, 0.1).unwrap()).unwrap();
            let recomposed = b.cc_truncated + b.normalization + b.frame + b.leak;
            assert!((recomposed - b.cc_n).abs() < 1e-12);
            assert!(b.cc_truncated >= 0.0 && b.cc_truncated <= b.vertices as f64 / (32.0 * 32.0));
        }
    }

    #[test]
    fn truncation_inactive_when_interior_and_short() {
        // one short triangle well inside each of four boxes
        let geometry = BoxGeometry::free(2, 16.0).unwrap();
        let mut coords = Vec::new();
        let mut edges = Vec::new();
        for (b, (cx, cy)) in [(0.0, 0.0), (-7.0, 0.0), (0.0, -7.0), (-7.0, -7.0)].iter().enumerate() {
            for (dx, dy) in [(0.0, 0.0), (0.3, 0.0), (0.0, 0.3)] {
                coords.extend([cx + dx, cy + dy]);
            }
            edges.extend([(3 * b, 3 * b + 1), (3 * b + 1, 3 * b + 2), (3 * b, 3 * b + 2)]);
        }
        let ps = PointSet::from_coords(geometry, coords, 1.0, 0).unwrap();
        let mut adjacency = vec![Vec::new(); 12];
        for (a, b) in edges {
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        adjacency.iter_mut().for_each(|l| l.sort_unstable());
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let g = WeightedGraph::from_parts(
            ps,
            WeightVector::from_values(vec![1.0; 12], 0).unwrap(),
            params,
            adjacency,
            crate::Engine::Naive,
            0,
        )
        .unwrap();
        let trunc = TruncationParams::new(8.0, 0.1).unwrap();
        let expect = 12.0 / 256.0 * averaged_cc(&g, 16.0);
        assert!((truncated_cc(&g, &trunc).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn frame_vertex_contributes_zero() {
        let geometry = BoxGeometry::free(2, 16.0).unwrap();
        // triangle with one vertex at x = 3.5, inside the 0.8-frame of the box [-4, 4]
        let ps = PointSet::from_coords(geometry, vec![3.5, 0.0, 3.0, 0.2, 3.0, -0.2], 1.0, 0).unwrap();
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let g = WeightedGraph::from_parts(
            ps,
            WeightVector::from_values(vec![1.0; 3], 0).unwrap(),
            params,
            vec![vec![1, 2], vec![0, 2], vec![0, 1]],
            crate::Engine::Naive,
            0,
        )
        .unwrap();
        let b = truncation_breakdown(&g, &TruncationParams::new(8.0, 0.1).unwrap()).unwrap();
        assert!((b.frame - 1.0 / 256.0).abs() < 1e-15);
        assert!((b.cc_truncated - 2.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn origin_cc_matches_full_graph() {
        let geometry = BoxGeometry::torus(2, 20.0).unwrap();
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        for replica in 0..10 {
            let ps = sample_ppp(geometry, 1.0, derive_seed(3, "palm/points", replica)).unwrap();
            let wv = sample_weights(&params.law, ps.len() + 1, derive_seed(3, "palm/weights", replica));
            let ps0 = ps.with_point(&[0.0, 0.0]).unwrap();
            let g = build_graph_cell(&ps0, &wv, &params, derive_seed(3, "palm/edges", replica)).unwrap();
            let direct = palm_replica(&params, &geometry, 3, replica).unwrap();
            assert_eq!(direct, local_cc(&g, ps.len()));
        }
    }

    #[test]
    fn palm_degenerate_when_sparse() {
        // tiny intensity: the origin is almost always isolated
        let params = ModelParams::new(2, 12.0, WeightLaw::pareto(3.5).unwrap(), 1e-3).unwrap();
        let geometry = BoxGeometry::torus(2, 20.0).unwrap();
        let est = palm_cc_estimate(&params, &geometry, 200, 1).unwrap();
        assert!(est.degenerate_fraction > 0.95);
        assert!(est.estimate < 0.05);
        assert!(palm_cc_estimate(&params, &geometry, 1, 1).is_err());
    }

    #[test]
    fn clique_event_gives_one() {
        // two points in the unit ball, all three joined, nothing else nearby
        let geometry = BoxGeometry::torus(2, 40.0).unwrap();
        let ps = PointSet::from_coords(geometry, vec![0.3, 0.1, -0.2, 0.4, 0.0, 0.0], 1.0, 0).unwrap();
        let wv = WeightVector::from_values(vec![50.0, 50.0, 50.0], 0).unwrap();
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let g = build_graph_cell(&ps, &wv, &params, 0).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(local_cc(&g, 2), 1.0);
    }
}
