//! Quenched and annealed statistics of sampled graphs.

pub mod clustering;
pub mod components;
pub mod degrees;
pub mod oracles;
pub mod quenched;

pub use clustering::{
    averaged_cc, local_cc, palm_cc_estimate, triangle_counts, truncated_cc, truncation_breakdown, CCReport,
    PalmEstimate, TruncationBreakdown, TruncationParams,
};
pub use components::{bfs_distance, connected_components, Components};
pub use degrees::{degree_histogram, hill_gamma, tail_ccdf, TailFit};
pub use oracles::{campbell_monte_carlo, slivnyak_mecke_check, CampbellMonteCarlo, SlivnyakCheck};
pub use quenched::{origin_degrees_within, quenched_conditional_degree, simulate_origin_degree};

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and unbiased standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1.0)).sqrt())
}

/// Sample variance together with its standard error
/// `sqrt((m4 - s^4 (n-3)/(n-1)) / n)`.
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (mean, sd) = mean_sd(xs);
    let var = sd * sd;
    let m4: Vec<f64> = xs.iter().map(|x| (x - mean).powi(4)).collect();
    let m4 = pairwise_sum(&m4) / n;
    let se = ((m4 - var * var * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt();
    (var, se)
}
