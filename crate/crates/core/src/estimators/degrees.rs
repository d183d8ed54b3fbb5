use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// degree → number of vertices with that degree.
pub fn degree_histogram(g: &WeightedGraph) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for d in g.degrees() {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// Rows `(s, P(D > s))` of the empirical complementary distribution, one per
/// distinct degree value.
pub fn tail_ccdf(degrees: &[usize]) -> Vec<(usize, f64)> {
    let n = degrees.len() as f64;
    let mut counts = BTreeMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    let mut above = degrees.len();
    counts
        .into_iter()
        .map(|(s, c)| {
            above -= c;
            (s, above as f64 / n)
        })
        .collect()
}

/// Hill estimate of the degree-tail exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub gamma_hat: f64,
    pub k: usize,
    /// Asymptotic standard error `γ̂/√k`.
    pub stderr: f64,
    pub sample_size: usize,
}

impl TailFit {
    /// Normal-approximation interval `γ̂ ± z·stderr`.
    pub fn ci(&self, z: f64) -> (f64, f64) {
        (self.gamma_hat - z * self.stderr, self.gamma_hat + z * self.stderr)
    }
}

/// Default number of order statistics: `⌊√n⌋`.
pub fn default_k(sample_size: usize) -> usize {
    (sample_size as f64).sqrt().floor() as usize
}

/// Hill estimator on the `k` largest values:
/// `γ̂ = k / Σ_{i≤k} ln(D_(i) / D_(k+1))`.
pub fn hill_gamma(degrees: &[usize], k: usize) -> Result<TailFit> {
    if k < 10 {
        return Err(Error::InsufficientData(format!("k must be at least 10, got {k}")));
    }
    let mut sorted: Vec<usize> = degrees.to_vec();
    // stable descending sort; ties keep input order
    sorted.sort_by(|a, b| b.cmp(a));
    if sorted.len() <= k || sorted[k] == 0 {
        let positive = sorted.iter().filter(|&&d| d > 0).count();
        return Err(Error::InsufficientData(format!(
            "need more than k = {k} positive degrees, have {positive}"
        )));
    }
    let threshold = sorted[k] as f64;
    let sum: f64 = sorted[..k].iter().map(|&d| (d as f64 / threshold).ln()).sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateTail);
    }
    let gamma_hat = k as f64 / sum;
    Ok(TailFit {
        gamma_hat,
        k,
        stderr: gamma_hat / (k as f64).sqrt(),
        sample_size: degrees.len(),
    })
}
