//! Regularly varying weight laws.
//!
//! Every law has tail `P(W > w) = c w^{-(τ-1)} (ln(e + w))^a` above its
//! essential infimum `w0`, where `w0` is the point at which that expression
//! equals one (so the tail is continuous and the law has no atom).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::integrate;
use crate::rng;

/// Built-in slowly varying factors `L(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlowlyVarying {
    Constant { c: f64 },
    LogPower { c: f64, a: f64 },
}

impl SlowlyVarying {
    fn scale_and_power(&self) -> (f64, f64) {
        match *self {
            SlowlyVarying::Constant { c } => (c, 0.0),
            SlowlyVarying::LogPower { c, a } => (c, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawSpec {
    Pareto { tau: f64 },
    ParetoWithSlowlyVarying { tau: f64, factor: SlowlyVarying },
}

/// Weight distribution with `1 - F(w) = w^{-(τ-1)} L(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LawSpec", into = "LawSpec")]
pub struct WeightLaw {
    spec: LawSpec,
    tau: f64,
    c: f64,
    log_power: f64,
    w0: f64,
}

impl TryFrom<LawSpec> for WeightLaw {
    type Error = crate::Error;

    fn try_from(spec: LawSpec) -> Result<Self> {
        match spec {
            LawSpec::Pareto { tau } => WeightLaw::pareto(tau),
            LawSpec::ParetoWithSlowlyVarying { tau, factor } => WeightLaw::slowly_varying(tau, factor),
        }
    }
}

impl From<WeightLaw> for LawSpec {
    fn from(law: WeightLaw) -> Self {
        law.spec
    }
}

impl WeightLaw {
    /// Pareto law on `[1, ∞)`: `P(W > w) = w^{-(τ-1)}`.
    pub fn pareto(tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self {
            spec: LawSpec::Pareto { tau },
            tau,
            c: 1.0,
            log_power: 0.0,
            w0: 1.0,
        })
    }

    pub fn slowly_varying(tau: f64, factor: SlowlyVarying) -> Result<Self> {
        check_tau(tau)?;
        let (c, a) = factor.scale_and_power();
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid("c", format!("scale must be positive, got {c}")));
        }
        if !a.is_finite() || a > tau - 1.0 {
            // beyond τ-1 the tail expression is not monotone near the origin
            return Err(invalid("a", format!("log power must be finite and at most τ-1 = {}, got {a}", tau - 1.0)));
        }
        let mut law = Self {
            spec: LawSpec::ParetoWithSlowlyVarying { tau, factor },
            tau,
            c,
            log_power: a,
            w0: 1.0,
        };
        law.w0 = if a == 0.0 {
            c.powf(1.0 / (tau - 1.0))
        } else {
            law.solve_raw_tail(1.0)
        };
        Ok(law)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn spec(&self) -> LawSpec {
        self.spec
    }

    /// Essential infimum of the law.
    pub fn infimum(&self) -> f64 {
        self.w0
    }

    #[inline]
    fn raw_tail(&self, w: f64) -> f64 {
        let base = self.c * w.powf(-(self.tau - 1.0));
        if self.log_power == 0.0 {
            base
        } else {
            base * (std::f64::consts::E + w).ln().powf(self.log_power)
        }
    }

    /// Solves `raw_tail(w) = u` for `u ∈ (0, 1]` by bisection on `ln w`.
    fn solve_raw_tail(&self, u: f64) -> f64 {
        // the Pareto part alone pins the root within a bracket
        let guess = (self.c / u).ln() / (self.tau - 1.0);
        let (mut lo, mut hi) = (guess - 10.0, guess + 10.0);
        while self.raw_tail(lo.exp()) < u {
            lo -= 10.0;
        }
        while self.raw_tail(hi.exp()) > u {
            hi += 10.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.raw_tail(mid.exp()) > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// `P(W > w)`.
    pub fn tail(&self, w: f64) -> f64 {
        if w < self.w0 {
            1.0
        } else {
            self.raw_tail(w).min(1.0)
        }
    }

    pub fn cdf(&self, w: f64) -> f64 {
        1.0 - self.tail(w)
    }

    /// Generalized inverse of the tail: the `w` with `P(W > w) = u`.
    pub fn inverse_tail(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return self.w0;
        }
        match self.spec {
            LawSpec::Pareto { .. } => u.powf(-1.0 / (self.tau - 1.0)),
            _ if self.log_power == 0.0 => (self.c / u).powf(1.0 / (self.tau - 1.0)),
            _ => self.solve_raw_tail(u).max(self.w0),
        }
    }

    /// `E[W^s]`; `+∞` once `s ≥ τ - 1`.
    pub fn fractional_moment(&self, s: f64) -> f64 {
        assert!(s >= 0.0, "fractional moment order must be nonnegative");
        if s == 0.0 {
            return 1.0;
        }
        let beta = self.tau - 1.0;
        if s >= beta {
            return f64::INFINITY;
        }
        if self.log_power == 0.0 {
            return self.w0.powf(s) * beta / (beta - s);
        }
        self.fractional_moment_by_quadrature(s)
    }

    /// `E[W^s] = w0^s + s ∫_{w0}^∞ w^{s-1} P(W > w) dw`, evaluated on the
    /// logarithmic scale `w = w0 e^t` (in log arithmetic, since the cut-off
    /// can lie far beyond `f64` range when `s` is close to `τ - 1`).
    pub fn fractional_moment_by_quadrature(&self, s: f64) -> f64 {
        let beta = self.tau - 1.0;
        if s >= beta {
            return f64::INFINITY;
        }
        let lw0 = self.w0.ln();
        let kappa = beta - s;
        let ln_integrand = |t: f64| s.ln() + s * (lw0 + t) + self.ln_raw_tail(lw0 + t).min(0.0);
        // past t_max the integrand is e^{-κ t} times a slowly varying factor;
        // its remaining mass is below integrand(t_max) (1 + |a|) / κ
        let target = (1e-13f64).ln() + s * lw0;
        let mut t_max = 10.0 / kappa;
        while ln_integrand(t_max) + ((1.0 + self.log_power.abs()) / kappa).ln() > target && t_max < 1e7 {
            t_max *= 1.5;
        }
        let q = integrate(|t| ln_integrand(t).exp(), 0.0, t_max, 1e-14, 1e-12);
        self.w0.powf(s) + q.value
    }

    /// `ln(c w^{-(τ-1)} (ln(e+w))^a)` as a function of `ln w`.
    fn ln_raw_tail(&self, lw: f64) -> f64 {
        let base = self.c.ln() - (self.tau - 1.0) * lw;
        if self.log_power == 0.0 {
            return base;
        }
        // ln(e + w) = ln w + ln(1 + e/w), stable for huge w
        let ln_e_plus_w = if lw > 1.0 {
            lw + (std::f64::consts::E * (-lw).exp()).ln_1p()
        } else {
            (std::f64::consts::E + lw.exp()).ln()
        };
        base + self.log_power * ln_e_plus_w.ln()
    }

    /// `ψ(θ) = E[1 - e^{-θ W}]`.
    ///
    /// Integration by parts gives `ψ(θ) = (1 - e^{-θ w0}) + ∫_{w0}^∞ θ e^{-θ w} P(W > w) dw`;
    /// the integral runs on `w = w0 e^t` up to `w0 + 40/θ`, past which it is
    /// below `e^{-40}`.
    pub fn psi(&self, theta: f64) -> f64 {
        if theta <= 0.0 {
            return 0.0;
        }
        if theta.is_infinite() {
            return 1.0;
        }
        let w0 = self.w0;
        let head = -(-theta * w0).exp_m1();
        let t_max = ((w0 + 40.0 / theta) / w0).ln();
        let q = integrate(
            |t| {
                let w = w0 * t.exp();
                theta * w * (-theta * w).exp() * self.raw_tail(w).min(1.0)
            },
            0.0,
            t_max,
            // ψ(θ) ≥ head, so this is a relative tolerance even for tiny θ
            1e-13 * head,
            1e-11,
        );
        (head + q.value).min(1.0)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 1.0 && tau.is_finite()) {
        return Err(invalid("tau", format!("must exceed 1, got {tau}")));
    }
    Ok(())
}

/// Anything that can stand in for the weight of the other endpoint of an
/// edge: the Laplace-type functional `ψ` and fractional moments.
pub trait WeightMixture: Sync {
    fn psi(&self, theta: f64) -> f64;
    fn fractional_moment(&self, s: f64) -> f64;
    /// Largest `s` for which `E[W^s]` may be finite.
    fn moment_limit(&self) -> f64;
}

impl WeightMixture for WeightLaw {
    fn psi(&self, theta: f64) -> f64 {
        WeightLaw::psi(self, theta)
    }

    fn fractional_moment(&self, s: f64) -> f64 {
        WeightLaw::fractional_moment(self, s)
    }

    fn moment_limit(&self) -> f64 {
        self.tau - 1.0
    }
}

/// i.i.d. weights index-aligned with a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    seed: u64,
}

impl WeightVector {
    pub fn from_values(values: Vec<f64>, seed: u64) -> Result<Self> {
        if let Some(w) = values.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid("weights", format!("weights must be positive and finite, got {w}")));
        }
        Ok(Self { values, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_value(&self, w: f64) -> Self {
        let mut values = self.values.clone();
        values.push(w);
        Self { values, seed: self.seed }
    }

    #[cfg(test)]
    pub(crate) fn values_mut(&mut self) -> &mut Vec<f64> {
        &mut self.values
    }
}

/// Draws `count` i.i.d. weights by inversion of the tail.
pub fn sample_weights(law: &WeightLaw, count: usize, seed: u64) -> WeightVector {
    let mut rng = rng::stream(seed);
    let values = (0..count)
        .map(|_| law.inverse_tail(1.0 - rng.random::<f64>()))
        .collect();
    WeightVector { values, seed }
}
