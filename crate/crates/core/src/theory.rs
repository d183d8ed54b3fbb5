//! Reference values: the constants `c0`, `c1`, boxed Campbell integrals of
//! the conditional degree, regime classification, and closed-form Campbell
//! functionals of radial step functions.
//!
//! Infinite-volume integrals are reduced to one radial dimension and
//! truncated at a radius past which `ψ(θ) ≤ θ^s E[W^s]` bounds the remainder.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};
use crate::graph::ModelParams;
use crate::pointprocess::BoxGeometry;
use crate::quadrature::{integrate, integrate_box};
use crate::weights::WeightMixture;

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = 0.5 * d as f64;
    std::f64::consts::PI.powf(h) / gamma(h + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `α ≤ d`: every vertex has infinite degree.
    InfiniteDegreeA,
    /// `γ ≤ 1`: every vertex has infinite degree.
    InfiniteDegreeB,
    /// Finite degrees with tail `s^{-γ} ℓ(s)`.
    PowerLaw { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub gamma: f64,
}

impl RegimeReport {
    pub fn has_finite_degrees(&self) -> bool {
        matches!(self.regime, Regime::PowerLaw { .. })
    }
}

pub fn classify_regime(params: &ModelParams) -> RegimeReport {
    let gamma = params.gamma();
    let regime = if params.alpha <= params.d as f64 {
        Regime::InfiniteDegreeA
    } else if gamma <= 1.0 {
        Regime::InfiniteDegreeB
    } else {
        Regime::PowerLaw { gamma }
    };
    RegimeReport { regime, gamma }
}

/// Degenerate law `W ≡ w`, for isolating the geometric integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass(pub f64);

impl WeightMixture for PointMass {
    fn psi(&self, theta: f64) -> f64 {
        if theta.is_infinite() {
            return 1.0;
        }
        -(-theta * self.0).exp_m1()
    }

    fn fractional_moment(&self, s: f64) -> f64 {
        self.0.powf(s)
    }

    fn moment_limit(&self) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampbellConstants {
    pub c0: f64,
    pub c1: f64,
    pub v_d: f64,
}

fn check_finite_regime(d: usize, alpha: f64, moment_limit: f64) -> Result<()> {
    let ratio = d as f64 / alpha;
    if alpha <= d as f64 {
        return Err(Error::Divergent(format!("α = {alpha} ≤ d = {d}")));
    }
    if ratio >= moment_limit {
        return Err(Error::Divergent(format!("E[W^(d/α)] is infinite (d/α = {ratio} ≥ τ-1 = {moment_limit})")));
    }
    Ok(())
}

/// `c0 = v_d Γ(1 - d/α) E[W^{d/α}]`.
pub fn c0(params: &ModelParams) -> Result<f64> {
    c0_for(&params.law, params.d, params.alpha)
}

pub fn c0_for<M: WeightMixture + ?Sized>(law: &M, d: usize, alpha: f64) -> Result<f64> {
    check_finite_regime(d, alpha, law.moment_limit())?;
    let ratio = d as f64 / alpha;
    Ok(unit_ball_volume(d) * gamma(1.0 - ratio) * law.fractional_moment(ratio))
}

/// `∫_{R^d} ψ(|y|^{-α}) dy` by radial quadrature.
pub fn c0_by_quadrature<M: WeightMixture + ?Sized>(law: &M, d: usize, alpha: f64) -> Result<f64> {
    check_finite_regime(d, alpha, law.moment_limit())?;
    radial_integral(law, d, alpha, 1)
}

/// `c1 = ∫_{R^d} ψ(|y|^{-α})² dy`.
pub fn c1(params: &ModelParams) -> Result<f64> {
    c1_for(&params.law, params.d, params.alpha)
}

pub fn c1_for<M: WeightMixture + ?Sized>(law: &M, d: usize, alpha: f64) -> Result<f64> {
    check_finite_regime(d, alpha, law.moment_limit())?;
    radial_integral(law, d, alpha, 2)
}

pub fn campbell_constants(params: &ModelParams) -> Result<CampbellConstants> {
    Ok(CampbellConstants {
        c0: c0(params)?,
        c1: c1(params)?,
        v_d: unit_ball_volume(params.d),
    })
}

/// `d v_d ∫_0^∞ ψ(r^{-α})^power r^{d-1} dr`, split at `r = 1`; the outer part
/// runs in `u = ln r` up to the radius where the analytic remainder
/// `d v_d (E[W^s])^p R^{d-αsp} / (αsp - d)` drops below `1e-12`.
fn radial_integral<M: WeightMixture + ?Sized>(law: &M, d: usize, alpha: f64, power: i32) -> Result<f64> {
    let df = d as f64;
    let surface = df * unit_ball_volume(d);
    let p = power as f64;
    let cap = law.moment_limit().min(1.0);
    let s = 0.5 * (df / (alpha * p) + cap);
    let moment = law.fractional_moment(s);
    let decay = alpha * s * p - df;
    if !(decay > 0.0 && moment.is_finite()) {
        return Err(Error::Divergent("no usable remainder bound".into()));
    }
    let f = |theta: f64| law.psi(theta).powi(power);
    let inner = integrate(|r| f(r.powf(-alpha)) * r.powi(d as i32 - 1), 0.0, 1.0, 1e-13, 1e-12);
    // remainder beyond e^U: surface moment^p e^{-decay U} / decay
    let tol = 1e-12;
    let u_max = ((surface * moment.powf(p) / (decay * tol)).ln() / decay).max(1.0);
    let outer = integrate(
        |u| {
            let theta = (-alpha * u).exp();
            let v = f(theta);
            if v == 0.0 {
                0.0
            } else {
                (v.ln() + df * u).exp()
            }
        },
        0.0,
        u_max,
        1e-13,
        1e-11,
    );
    Ok(surface * (inner.value + outer.value))
}

/// Boxed Campbell integral `λ ∫_B ψ(w |x|^{-α})^power dx` for a vertex at the
/// center of the box. On the torus the minimum-image distance to the center
/// is the Euclidean norm, so both topologies share this integral.
fn boxed_integral<M: WeightMixture + ?Sized>(
    law: &M,
    alpha: f64,
    intensity: f64,
    geometry: &BoxGeometry,
    w: f64,
    power: i32,
) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let d = geometry.dim();
    let h = geometry.half_side();
    let g = |r: f64| {
        if r == 0.0 {
            1.0
        } else {
            law.psi(w * r.powf(-alpha)).powi(power)
        }
    };
    let value = match d {
        1 => 2.0 * integrate(g, 0.0, h, 1e-12, 1e-11).value,
        2 => {
            let pi = std::f64::consts::PI;
            let disc = integrate(|r| g(r) * 2.0 * pi * r, 0.0, h, 1e-12, 1e-11).value;
            // circle arcs remaining inside the square once r > h
            let corners = integrate(
                |r| g(r) * r * (2.0 * pi - 8.0 * (h / r).min(1.0).acos()),
                h,
                h * std::f64::consts::SQRT_2,
                1e-12,
                1e-11,
            )
            .value;
            disc + corners
        }
        _ => {
            let lo = vec![0.0; d];
            let hi = vec![h; d];
            let q = integrate_box(
                |x| g(x.iter().map(|c| c * c).sum::<f64>().sqrt()),
                &lo,
                &hi,
                1e-9 * h.powi(d as i32),
                1e-8,
            );
            2f64.powi(d as i32) * q.value
        }
    };
    intensity * value
}

/// `E[Z_w]` in the box: `λ ∫_B ψ(w dist(0, x)^{-α}) dx`.
pub fn annealed_mean_degree(params: &ModelParams, geometry: &BoxGeometry, w: f64) -> f64 {
    boxed_integral(&params.law, params.alpha, params.intensity, geometry, w, 1)
}

/// `Var(Z_w)` in the box: `λ ∫_B ψ(w dist(0, x)^{-α})² dx`.
pub fn annealed_degree_variance(params: &ModelParams, geometry: &BoxGeometry, w: f64) -> f64 {
    boxed_integral(&params.law, params.alpha, params.intensity, geometry, w, 2)
}

pub fn annealed_mean_degree_for<M: WeightMixture + ?Sized>(
    law: &M,
    alpha: f64,
    intensity: f64,
    geometry: &BoxGeometry,
    w: f64,
) -> f64 {
    boxed_integral(law, alpha, intensity, geometry, w, 1)
}

/// Infinite-volume mean `λ c0 w^{d/α}`.
pub fn infinite_volume_mean_degree(params: &ModelParams, w: f64) -> Result<f64> {
    Ok(params.intensity * c0(params)? * w.powf(params.d as f64 / params.alpha))
}

/// Radial step function `f(x) = heights[k]` for `radii[k-1] < |x| ≤ radii[k]`
/// (with `radii[-1] = 0`), zero outside the last shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    radii: Vec<f64>,
    heights: Vec<f64>,
}

impl StepFunction {
    pub fn new(radii: Vec<f64>, heights: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != heights.len() {
            return Err(invalid("step", "need one height per shell"));
        }
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(invalid("step", "heights must be finite"));
        }
        let mut prev = 0.0;
        for &r in &radii {
            if !(r.is_finite() && r > prev) {
                return Err(invalid("step", "radii must be finite and strictly increasing from 0"));
            }
            prev = r;
        }
        Ok(Self { radii, heights })
    }

    pub fn indicator(radius: f64, height: f64) -> Result<Self> {
        Self::new(vec![radius], vec![height])
    }

    pub fn support_radius(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.radii
            .iter()
            .position(|&outer| r <= outer)
            .map_or(0.0, |k| self.heights[k])
    }

    fn shells(&self, d: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let v = unit_ball_volume(d);
        let di = d as i32;
        self.radii.iter().zip(&self.heights).scan(0.0, move |inner: &mut f64, (&r, &h)| {
            let vol = v * (r.powi(di) - inner.powi(di));
            *inner = r;
            Some((h, vol))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampbellMoments {
    pub mean: f64,
    pub variance: f64,
    pub log_mgf: f64,
}

/// Closed forms for `S = Σ_{x∈η} f(x)`: `λ∫f`, `λ∫f²`, `λ∫(e^{θ f} - 1)`.
pub fn campbell_check(f: &StepFunction, d: usize, intensity: f64, theta: f64) -> CampbellMoments {
    let mut out = CampbellMoments { mean: 0.0, variance: 0.0, log_mgf: 0.0 };
    for (h, vol) in f.shells(d) {
        out.mean += intensity * h * vol;
        out.variance += intensity * h * h * vol;
        out.log_mgf += intensity * (theta * h).exp_m1() * vol;
    }
    out
}
