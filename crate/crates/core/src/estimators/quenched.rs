//! Degree of a vertex placed at a fixed location, conditional on the point
//! configuration.

use crate::error::Result;
use crate::graph::{EdgeSampler, ModelParams};
use crate::pointprocess::PointSet;
use crate::weights::{sample_weights, WeightMixture, WeightVector};

use super::pairwise_sum;

/// `Z_w(η) = Σ_{x∈η} ψ(w · dist(origin, x)^{-α})`: the expected degree of a
/// vertex of weight `w` at `origin`, given the configuration.
pub fn quenched_conditional_degree<M: WeightMixture + ?Sized>(
    ps: &PointSet,
    law: &M,
    alpha: f64,
    w: f64,
    origin: &[f64],
) -> f64 {
    let g = ps.geometry();
    let terms: Vec<f64> = ps
        .iter()
        .map(|x| {
            let r2 = g.dist2(origin, x);
            if r2 == 0.0 {
                1.0
            } else {
                law.psi(w * r2.powf(-0.5 * alpha))
            }
        })
        .collect();
    pairwise_sum(&terms)
}

/// Appends a vertex at `origin` with weight `w` and returns the neighbor list
/// of that vertex (index `ps.len()`) in the resulting graph.
pub fn adjoined_neighbors(
    ps: &PointSet,
    wv: &WeightVector,
    params: &ModelParams,
    edge_seed: u64,
    origin: &[f64],
    w: f64,
) -> Result<(PointSet, WeightVector, Vec<u32>)> {
    let ps0 = ps.with_point(origin)?;
    let wv0 = wv.with_value(w);
    let sampler = EdgeSampler::new(&ps0, &wv0, params, edge_seed)?;
    let nbrs = sampler.neighbors(ps.len());
    Ok((ps0, wv0, nbrs))
}

/// One draw of the degree of a weight-`w` vertex adjoined at `origin`: the
/// other weights are redrawn from `weight_seed`, the edges from `edge_seed`.
pub fn simulate_origin_degree(
    ps: &PointSet,
    params: &ModelParams,
    w: f64,
    origin: &[f64],
    weight_seed: u64,
    edge_seed: u64,
) -> Result<usize> {
    let wv = sample_weights(&params.law, ps.len(), weight_seed);
    Ok(adjoined_neighbors(ps, &wv, params, edge_seed, origin, w)?.2.len())
}

/// Degree of an adjoined origin counting only neighbors within each radius.
pub fn origin_degrees_within(
    ps: &PointSet,
    wv: &WeightVector,
    params: &ModelParams,
    edge_seed: u64,
    w: f64,
    radii: &[f64],
) -> Result<Vec<usize>> {
    let origin = vec![0.0; ps.dim()];
    let (ps0, _, nbrs) = adjoined_neighbors(ps, wv, params, edge_seed, &origin, w)?;
    let g = ps0.geometry();
    let dists: Vec<f64> = nbrs.iter().map(|&j| g.distance(&origin, ps0.point(j as usize))).collect();
    Ok(radii.iter().map(|&r| dists.iter().filter(|&&d| d <= r).count()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::mean_sd;
    use crate::pointprocess::{sample_ppp, BoxGeometry};
    use crate::rng::derive_seed;
    use crate::theory::PointMass;
    use crate::weights::WeightLaw;

    #[test]
    fn empty_and_single_point() {
        let g = BoxGeometry::torus(2, 10.0).unwrap();
        let empty = PointSet::from_coords(g, vec![], 1.0, 0).unwrap();
        assert_eq!(quenched_conditional_degree(&empty, &PointMass(1.0), 3.0, 2.0, &[0.0, 0.0]), 0.0);
        let one = PointSet::from_coords(g, vec![1.5, 0.0], 1.0, 0).unwrap();
        let z = quenched_conditional_degree(&one, &PointMass(1.0), 3.0, 2.0, &[0.0, 0.0]);
        let expect = 1.0 - (-2.0 * 1.5f64.powf(-3.0)).exp();
        assert!((z - expect).abs() < 1e-15);
    }

    /// For fixed η and w, the mean simulated degree over weight/edge seeds
    /// is the quenched conditional degree.
    #[test]
    fn quenched_degree_consistency() {
        let g = BoxGeometry::torus(2, 12.0).unwrap();
        let ps = sample_ppp(g, 1.0, 77).unwrap();
        let params = ModelParams::new(2, 4.0, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let w = 3.0;
        let origin = [0.0, 0.0];
        let z = quenched_conditional_degree(&ps, &params.law, params.alpha, w, &origin);
        let reps = 10_000;
        let draws: Vec<f64> = (0..reps)
            .map(|r| {
                simulate_origin_degree(&ps, &params, w, &origin, derive_seed(5, "w", r), derive_seed(5, "e", r)).unwrap()
                    as f64
            })
            .collect();
        let (m, sd) = mean_sd(&draws);
        let se = sd / (reps as f64).sqrt();
        assert!((m - z).abs() < 4.0 * se, "mean {m} vs Z_w {z} (se {se})");
    }

    #[test]
    fn truncated_degrees_nested() {
        let g = BoxGeometry::torus(2, 30.0).unwrap();
        let ps = sample_ppp(g, 1.0, 3).unwrap();
        let params = ModelParams::new(2, 1.5, WeightLaw::pareto(2.5).unwrap(), 1.0).unwrap();
        let wv = sample_weights(&params.law, ps.len(), 4);
        let d = origin_degrees_within(&ps, &wv, &params, 9, 1.0, &[2.0, 4.0, 8.0, 15.0 * 2f64.sqrt()]).unwrap();
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
        let (_, _, all) = adjoined_neighbors(&ps, &wv, &params, 9, &[0.0, 0.0], 1.0).unwrap();
        assert_eq!(d[3], all.len());
    }
}
