//! Homogeneous Poisson point processes in a d-dimensional box, with
//! torus/free-boundary metrics and a cell-grid index.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Periodic box with minimum-image distances.
    #[default]
    Torus,
    FreeBoundary,
}

impl std::str::FromStr for Topology {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Topology::Torus),
            "free" | "free_boundary" => Ok(Topology::FreeBoundary),
            other => Err(invalid("topology", format!("unknown topology `{other}`"))),
        }
    }
}

/// The d-cube of side `side` centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxGeometry {
    dim: usize,
    side: f64,
    topology: Topology,
}

impl BoxGeometry {
    pub fn new(dim: usize, side: f64, topology: Topology) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(invalid("side", format!("box side must be positive and finite, got {side}")));
        }
        Ok(Self { dim, side, topology })
    }

    pub fn torus(dim: usize, side: f64) -> Result<Self> {
        Self::new(dim, side, Topology::Torus)
    }

    pub fn free(dim: usize, side: f64) -> Result<Self> {
        Self::new(dim, side, Topology::FreeBoundary)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn half_side(&self) -> f64 {
        0.5 * self.side
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let h = self.half_side();
        x.len() == self.dim && x.iter().all(|c| (-h..=h).contains(c))
    }

    /// Per-axis displacement magnitude under this topology.
    #[inline(always)]
    pub fn axis_gap(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        match self.topology {
            Topology::Torus if d > 0.5 * self.side => self.side - d,
            _ => d,
        }
    }

    #[inline]
    pub fn dist2(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| {
                let g = self.axis_gap(*a, *b);
                g * g
            })
            .sum()
    }

    /// Euclidean distance, minimum-image on the torus.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.dist2(x, y).sqrt()
    }
}

/// A sample of the point process restricted to a box.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    geometry: BoxGeometry,
    coords: Vec<f64>,
    intensity: f64,
    seed: u64,
}

impl PointSet {
    /// Wraps explicit coordinates (row-major, `dim` values per point).
    pub fn from_coords(geometry: BoxGeometry, coords: Vec<f64>, intensity: f64, seed: u64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(invalid("intensity", format!("must be positive, got {intensity}")));
        }
        if !coords.len().is_multiple_of(geometry.dim()) {
            return Err(invalid("coords", "length is not a multiple of the dimension"));
        }
        let ps = Self { geometry, coords, intensity, seed };
        if let Some(i) = (0..ps.len()).find(|&i| !geometry.contains(ps.point(i))) {
            return Err(invalid("coords", format!("point {i} lies outside the box")));
        }
        Ok(ps)
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.geometry.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline(always)]
    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.geometry.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.geometry.dim())
    }

    /// Returns a copy with `x` appended as the last point.
    pub fn with_point(&self, x: &[f64]) -> Result<Self> {
        if !self.geometry.contains(x) {
            return Err(invalid("point", "adjoined point lies outside the box"));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(x);
        Ok(Self { coords, ..self.clone() })
    }

    /// Number of points with no other point within distance `r`.
    pub fn count_isolated(&self, r: f64) -> usize {
        let cell = r.max(self.geometry.side() / 1024.0).min(self.geometry.side());
        let grid = CellGrid::build(self, cell).expect("positive cell side");
        let r2 = r * r;
        (0..self.len())
            .filter(|&i| {
                let x = self.point(i);
                let mut alone = true;
                grid.for_each_within(self, x, r, |j| {
                    if j != i && self.geometry.dist2(x, self.point(j)) <= r2 {
                        alone = false;
                    }
                });
                alone
            })
            .count()
    }
}

/// Samples a homogeneous PPP of the given intensity: Poisson count, then
/// i.i.d. uniform coordinates.
pub fn sample_ppp(geometry: BoxGeometry, intensity: f64, seed: u64) -> Result<PointSet> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(invalid("intensity", format!("must be positive, got {intensity}")));
    }
    let mut rng = rng::stream(seed);
    let mean = intensity * geometry.volume();
    let count = Poisson::new(mean)
        .map_err(|e| invalid("intensity", e.to_string()))?
        .sample(&mut rng) as usize;
    let n = geometry.side();
    let coords = (0..count * geometry.dim())
        .map(|_| (rng.random::<f64>() - 0.5) * n)
        .collect();
    Ok(PointSet { geometry, coords, intensity, seed })
}

/// Uniform cell partition of the box, used only as a spatial index.
#[derive(Debug, Clone)]
pub struct CellGrid {
    cell_side: f64,
    per_axis: usize,
    dim: usize,
    side: f64,
    cells: BTreeMap<u64, Vec<usize>>,
}

impl CellGrid {
    pub fn build(ps: &PointSet, cell_side: f64) -> Result<Self> {
        let g = ps.geometry();
        if cell_side.is_nan() || cell_side <= 0.0 {
            return Err(invalid("cell_side", format!("must be positive, got {cell_side}")));
        }
        // uniform cells (no partial cell at the edge) so torus wrap-around
        // neighbors stay within the same lattice reach
        let per_axis = (g.side() / cell_side.min(g.side())).ceil().max(1.0) as usize;
        let cell_side = g.side() / per_axis as f64;
        if (per_axis as f64).powi(g.dim() as i32) > 2f64.powi(62) {
            return Err(invalid("cell_side", "too many cells for the index"));
        }
        let mut grid = Self {
            cell_side,
            per_axis,
            dim: g.dim(),
            side: g.side(),
            cells: BTreeMap::new(),
        };
        for (i, x) in ps.iter().enumerate() {
            let key = grid.cell_of(x);
            grid.cells.entry(key).or_default().push(i);
        }
        Ok(grid)
    }

    /// Default cell side giving about `target` points per cell.
    pub fn default_side(geometry: &BoxGeometry, intensity: f64, target: f64) -> f64 {
        (target / intensity).powf(1.0 / geometry.dim() as f64).clamp(1.0_f64.min(geometry.side()), geometry.side())
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn axis_index(&self, c: f64) -> usize {
        let k = ((c + 0.5 * self.side) / self.cell_side).floor();
        (k.max(0.0) as usize).min(self.per_axis - 1)
    }

    pub fn cell_of(&self, x: &[f64]) -> u64 {
        x.iter()
            .fold(0u64, |acc, &c| acc * self.per_axis as u64 + self.axis_index(c) as u64)
    }

    pub fn lattice(&self, key: u64) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        let mut k = key;
        for slot in out.iter_mut().rev() {
            *slot = (k % self.per_axis as u64) as usize;
            k /= self.per_axis as u64;
        }
        out
    }

    /// Closed coordinate interval covered by cell index `k` along one axis.
    pub fn axis_bounds(&self, k: usize) -> (f64, f64) {
        let lo = -0.5 * self.side + k as f64 * self.cell_side;
        let hi = if k + 1 == self.per_axis { 0.5 * self.side } else { lo + self.cell_side };
        (lo, hi)
    }

    pub fn cells(&self) -> impl Iterator<Item = (u64, &[usize])> {
        self.cells.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn cell(&self, key: u64) -> &[usize] {
        self.cells.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn occupied(&self) -> usize {
        self.cells.len()
    }

    /// Visits every point whose cell intersects the (torus-aware) cube of
    /// half-width `r` around `x`. Callers still filter by exact distance.
    pub fn for_each_within<F: FnMut(usize)>(&self, ps: &PointSet, x: &[f64], r: f64, mut f: F) {
        let torus = ps.geometry().topology() == Topology::Torus;
        let reach = (r / self.cell_side).ceil() as i64;
        let m = self.per_axis as i64;
        let span = (2 * reach + 1).min(m);
        let mut ranges = Vec::with_capacity(self.dim);
        for &c in x {
            let k = self.axis_index(c) as i64;
            let ks: Vec<usize> = if torus {
                if span >= m {
                    (0..m as usize).collect()
                } else {
                    (k - reach..=k + reach).map(|v| v.rem_euclid(m) as usize).collect()
                }
            } else {
                ((k - reach).max(0)..=(k + reach).min(m - 1)).map(|v| v as usize).collect()
            };
            ranges.push(ks);
        }
        let mut idx = vec![0usize; self.dim];
        loop {
            let key = idx
                .iter()
                .zip(&ranges)
                .fold(0u64, |acc, (&i, r)| acc * m as u64 + r[i] as u64);
            for &j in self.cell(key) {
                f(j);
            }
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < ranges[axis].len() {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_distance() {
        let g = BoxGeometry::free(2, 20.0).unwrap();
        assert_eq!(g.distance(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
    }

    #[test]
    fn torus_wraparound() {
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        assert!((g.distance(&[-4.5, 0.0], &[4.5, 0.0]) - 1.0).abs() < 1e-12);
        assert_eq!(g.distance(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn geometry_rejects_bad_input() {
        assert!(BoxGeometry::torus(0, 1.0).is_err());
        assert!(BoxGeometry::torus(2, 0.0).is_err());
        assert!(BoxGeometry::torus(2, -1.0).is_err());
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        assert!(sample_ppp(g, 0.0, 1).is_err());
        assert!(sample_ppp(g, -2.0, 1).is_err());
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let g = BoxGeometry::torus(3, 6.0).unwrap();
        let a = sample_ppp(g, 1.5, 99).unwrap();
        let b = sample_ppp(g, 1.5, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| g.contains(x)));
    }

    fn count_stats(d: usize, n: f64, lambda: f64, seeds: u64) -> (f64, f64) {
        let g = BoxGeometry::torus(d, n).unwrap();
        let counts: Vec<f64> = (0..seeds)
            .map(|s| sample_ppp(g, lambda, s).unwrap().len() as f64)
            .collect();
        let m = counts.iter().sum::<f64>() / seeds as f64;
        let v = counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (seeds as f64 - 1.0);
        (m, v)
    }

    #[test]
    fn counts_are_poisson() {
        // mean and variance both λ n^d = 100; SE(mean) = √(100/500), SE(var) ≈ √(2·100²/500)
        let seeds = 500;
        let (m, v) = count_stats(2, 10.0, 1.0, seeds);
        let se_mean = (100.0 / seeds as f64).sqrt();
        let se_var = (2.0 * 100.0f64.powi(2) / seeds as f64 + 100.0 / seeds as f64).sqrt();
        assert!((m - 100.0).abs() < 4.0 * se_mean, "mean {m}");
        assert!((v - 100.0).abs() < 4.0 * se_var, "var {v}");
        let (m, _) = count_stats(1, 4.0, 0.5, 2000);
        assert!((m - 2.0).abs() < 4.0 * (2.0f64 / 2000.0).sqrt(), "mean {m}");
    }

    #[test]
    fn disjoint_subboxes_uncorrelated() {
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        let seeds = 600;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for s in 0..seeds {
            let ps = sample_ppp(g, 1.0, 1000 + s).unwrap();
            a.push(ps.iter().filter(|x| x[0] < 0.0).count() as f64);
            b.push(ps.iter().filter(|x| x[0] >= 0.0).count() as f64);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let corr = cov / (va * vb).sqrt();
        assert!(corr.abs() < 4.0 / (seeds as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn cell_grid_single_point() {
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        let ps = PointSet::from_coords(g, vec![0.0, 0.0], 1.0, 0).unwrap();
        let grid = CellGrid::build(&ps, 5.0).unwrap();
        assert_eq!(grid.occupied(), 1);
        assert!(CellGrid::build(&ps, 0.0).is_err());
    }

    #[test]
    fn cell_grid_partition() {
        let g = BoxGeometry::free(2, 17.0).unwrap();
        let ps = sample_ppp(g, 2.0, 5).unwrap();
        for side in [0.7, 3.0, 17.0] {
            let grid = CellGrid::build(&ps, side).unwrap();
            let mut seen = vec![0; ps.len()];
            for (key, members) in grid.cells() {
                for &i in members {
                    seen[i] += 1;
                    assert_eq!(grid.cell_of(ps.point(i)), key);
                    let lat = grid.lattice(key);
                    for (axis, &k) in lat.iter().enumerate() {
                        let (lo, hi) = grid.axis_bounds(k);
                        let c = ps.point(i)[axis];
                        assert!(lo <= c && c <= hi);
                    }
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            let bound = (17.0 / side).ceil().powi(2) as usize;
            assert!(grid.occupied() <= bound);
        }
        let whole = CellGrid::build(&ps, 17.0).unwrap();
        assert_eq!(whole.occupied(), 1);
    }

    #[test]
    fn isolated_count_matches_brute_force() {
        for topo in [Topology::Torus, Topology::FreeBoundary] {
            let g = BoxGeometry::new(2, 12.0, topo).unwrap();
            let ps = sample_ppp(g, 1.0, 3).unwrap();
            let r = 0.9;
            let brute = (0..ps.len())
                .filter(|&i| (0..ps.len()).all(|j| j == i || g.distance(ps.point(i), ps.point(j)) > r))
                .count();
            assert_eq!(ps.count_isolated(r), brute);
        }
    }

    proptest! {
        #[test]
        fn torus_metric_axioms(
            pts in proptest::collection::vec(-5.0f64..5.0, 9),
        ) {
            let g = BoxGeometry::torus(3, 10.0).unwrap();
            let f = BoxGeometry::free(3, 10.0).unwrap();
            let (x, y, z) = (&pts[0..3], &pts[3..6], &pts[6..9]);
            let dxy = g.distance(x, y);
            prop_assert!((dxy - g.distance(y, x)).abs() < 1e-12);
            prop_assert!(dxy <= g.distance(x, z) + g.distance(z, y) + 1e-12);
            prop_assert!(dxy <= f.distance(x, y) + 1e-12);
            for a in 0..3 {
                prop_assert!(g.axis_gap(x[a], y[a]) <= 5.0);
            }
        }
    }
}
