//! Monte Carlo checks of the Slivnyak–Mecke and Campbell identities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pointprocess::{sample_ppp, BoxGeometry, Topology};
use crate::rng::derive_seed;
use crate::theory::{campbell_check, unit_ball_volume, CampbellMoments, StepFunction};

use super::{mean_sd, pairwise_sum, variance_with_se};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlivnyakCheck {
    pub empirical: f64,
    pub stderr: f64,
    pub analytic: f64,
    pub seeds: usize,
}

impl SlivnyakCheck {
    /// Distance from the analytic value in standard errors.
    pub fn z(&self) -> f64 {
        (self.empirical - self.analytic) / self.stderr
    }
}

/// Mean number of points with no other point within `r`, over `seeds` PPP
/// samples, against `λ n^d e^{-λ v_d r^d}`.
pub fn slivnyak_mecke_check(geometry: &BoxGeometry, intensity: f64, r: f64, seeds: usize, seed: u64) -> Result<SlivnyakCheck> {
    if geometry.topology() == Topology::Torus && r >= geometry.half_side() {
        return Err(invalid("r", format!("must be below n/2 = {}", geometry.half_side())));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(invalid("r", format!("must be positive, got {r}")));
    }
    if seeds < 2 {
        return Err(invalid("seeds", "need at least two seeds"));
    }
    let counts: Vec<f64> = (0..seeds as u64)
        .into_par_iter()
        .map(|k| {
            let ps = sample_ppp(*geometry, intensity, derive_seed(seed, "slivnyak", k))?;
            Ok(ps.count_isolated(r) as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, sd) = mean_sd(&counts);
    let d = geometry.dim();
    Ok(SlivnyakCheck {
        empirical: mean,
        stderr: sd / (seeds as f64).sqrt(),
        analytic: intensity * geometry.volume() * (-intensity * unit_ball_volume(d) * r.powi(d as i32)).exp(),
        seeds,
    })
}

/// Empirical moments of `S = Σ f(|x|)` with standard errors, beside the
/// closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampbellMonteCarlo {
    pub exact: CampbellMoments,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub log_mgf: f64,
    pub log_mgf_se: f64,
    pub samples: usize,
}

impl CampbellMonteCarlo {
    /// Largest deviation from the closed forms, in standard errors.
    pub fn max_z(&self) -> f64 {
        [
            (self.mean - self.exact.mean) / self.mean_se,
            (self.variance - self.exact.variance) / self.variance_se,
            (self.log_mgf - self.exact.log_mgf) / self.log_mgf_se,
        ]
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
    }
}

pub fn campbell_monte_carlo(
    f: &StepFunction,
    d: usize,
    intensity: f64,
    theta: f64,
    samples: usize,
    seed: u64,
) -> Result<CampbellMonteCarlo> {
    if samples < 2 {
        return Err(invalid("samples", "need at least two samples"));
    }
    // a free box just covering the support
    let geometry = BoxGeometry::free(d, 2.0 * f.support_radius() * (1.0 + 1e-9))?;
    let sums: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let ps = sample_ppp(geometry, intensity, derive_seed(seed, "campbell", k))?;
            let vals: Vec<f64> = ps.iter().map(|x| f.eval(x.iter().map(|c| c * c).sum::<f64>().sqrt())).collect();
            Ok(pairwise_sum(&vals))
        })
        .collect::<Result<_>>()?;
    let n = samples as f64;
    let (mean, sd) = mean_sd(&sums);
    let (variance, variance_se) = variance_with_se(&sums);
    let exps: Vec<f64> = sums.iter().map(|s| (theta * s).exp()).collect();
    let (mgf, mgf_sd) = mean_sd(&exps);
    Ok(CampbellMonteCarlo {
        exact: campbell_check(f, d, intensity, theta),
        mean,
        mean_se: sd / n.sqrt(),
        variance,
        variance_se,
        log_mgf: mgf.ln(),
        // delta method
        log_mgf_se: mgf_sd / (n.sqrt() * mgf),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slivnyak_limits_and_errors() {
        let g = BoxGeometry::torus(2, 20.0).unwrap();
        let c = slivnyak_mecke_check(&g, 1.0, 1e-6, 2, 0).unwrap();
        assert!((c.analytic - 400.0).abs() < 1e-6);
        let c = slivnyak_mecke_check(&g, 1e-12, 1.0, 2, 0).unwrap();
        assert!(c.analytic < 1e-9);
        assert!(slivnyak_mecke_check(&g, 1.0, 10.0, 2, 0).is_err());
        assert!(slivnyak_mecke_check(&g, 1.0, 1.0, 1, 0).is_err());
    }

    #[test]
    fn slivnyak_small_box() {
        let g = BoxGeometry::torus(2, 30.0).unwrap();
        let c = slivnyak_mecke_check(&g, 1.0, 1.0, 200, 9).unwrap();
        assert!(c.z().abs() < 4.0, "{c:?}");
    }

    #[test]
    fn campbell_indicator() {
        let f = StepFunction::indicator(1.0, 1.0).unwrap();
        let mc = campbell_monte_carlo(&f, 2, 1.0, 0.5, 4000, 3).unwrap();
        assert!(mc.max_z() < 4.0, "{mc:?}");
        assert!((mc.exact.mean - std::f64::consts::PI).abs() < 1e-12);
    }
}
