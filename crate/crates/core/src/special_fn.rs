//! Three-parameter Mittag-Leffler (Prabhakar) function and the
//! Havriliak-Negami relaxation kernel built on it.
//!
//! The Prabhakar function is
//!
//! ```text
//! E^γ_{ρ,μ}(z) = Σ_{k≥0} Γ(k+γ) / (Γ(γ) Γ(ρk+μ)) · z^k / k!
//! ```
//!
//! and `e^γ_{ρ,μ}(t; λ) = t^{μ-1} E^γ_{ρ,μ}(λ t^ρ)` is the function whose
//! Laplace transform is `s^{ργ-μ} / (s^ρ - λ)^γ`. With `ρ = α`, `μ = αβ`,
//! `γ = β`, `λ = -1` this is the Havriliak-Negami kernel `ω_{α,β}`, the
//! inverse Laplace transform of `(1 + s^α)^{-β}`.
//!
//! Evaluation is by direct power series, intended for moderate arguments
//! (`|z|` up to about 10). There is no asymptotic branch: arguments whose
//! series does not settle within [`MAX_TERMS`] terms are reported as errors.

use statrs::function::gamma::{gamma, ln_gamma};

use crate::compensated::CompensatedSum;
use crate::error::{check_param, Error, Result};

/// Relative stopping tolerance of the series.
pub const SERIES_TOL: f64 = 1e-16;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1000;

// Below this argument Γ itself is evaluated; above it the ratio goes
// through log-Γ differences.
const DIRECT_GAMMA_LIMIT: f64 = 150.0;

/// Parameters of `e^γ_{ρ,μ}(t; λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarParams {
    pub rho: f64,
    pub mu: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl PrabhakarParams {
    /// Series parameters with `λ = -1`, the convention used by every
    /// kernel in this crate.
    pub fn new(rho: f64, mu: f64, gamma: f64) -> Result<Self> {
        Self::with_lambda(rho, mu, gamma, -1.0)
    }

    pub fn with_lambda(rho: f64, mu: f64, gamma: f64, lambda: f64) -> Result<Self> {
        check_param(rho > 0.0 && rho.is_finite(), "rho", || format!("must be > 0, got {rho}"))?;
        check_param(mu > 0.0 && mu.is_finite(), "mu", || format!("must be > 0, got {mu}"))?;
        check_param(gamma > 0.0 && gamma.is_finite(), "gamma", || {
            format!("must be > 0, got {gamma}")
        })?;
        check_param(lambda.is_finite(), "lambda", || format!("must be finite, got {lambda}"))?;
        Ok(Self { rho, mu, gamma, lambda })
    }

    /// `e^γ_{ρ,μ}(t; λ) = t^{μ-1} E^γ_{ρ,μ}(λ t^ρ)` for `t > 0`.
    pub fn e_fn(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("e_fn needs t > 0, got {t}")));
        }
        Ok(t.powf(self.mu - 1.0) * ml3(*self, self.lambda * t.powf(self.rho))?)
    }
}

/// `Γ(x) / Γ(x + d)` for `x > 0`, `d > 0`.
fn gamma_ratio(x: f64, d: f64) -> f64 {
    if d == 1.0 {
        1.0 / x
    } else if x + d < DIRECT_GAMMA_LIMIT {
        gamma(x) / gamma(x + d)
    } else {
        (ln_gamma(x) - ln_gamma(x + d)).exp()
    }
}

/// Three-parameter Mittag-Leffler function `E^γ_{ρ,μ}(z)`.
///
/// Terms follow the ratio recurrence
/// `t_{k+1} / t_k = (k+γ)/(k+1) · Γ(ρk+μ)/Γ(ρk+ρ+μ) · z` and are accumulated
/// with compensated summation. Summation stops once a term falls below
/// `1e-16·(1 + |partial sum|)` past the peak of the term magnitudes.
pub fn ml3(params: PrabhakarParams, z: f64) -> Result<f64> {
    let PrabhakarParams { rho, mu, gamma: g, .. } = params;
    if !z.is_finite() {
        return Err(Error::Domain(format!("ml3 argument must be finite, got {z}")));
    }
    let mut term = 1.0 / gamma(mu);
    if !term.is_finite() {
        // 1/Γ(μ) for huge μ underflows to zero; the series is then zero too.
        term = (-ln_gamma(mu)).exp();
    }
    let mut acc = CompensatedSum::new();
    for k in 0..MAX_TERMS {
        acc.add(term);
        let kf = k as f64;
        let ratio = (kf + g) / (kf + 1.0) * gamma_ratio(rho * kf + mu, rho) * z;
        let next = term * ratio;
        if next.abs() < SERIES_TOL * (1.0 + acc.value().abs()) && ratio.abs() < 1.0 {
            return Ok(acc.value());
        }
        if !next.is_finite() {
            return Err(Error::SeriesNotConverged { terms: k + 1, last_term: next.abs() });
        }
        term = next;
    }
    Err(Error::SeriesNotConverged { terms: MAX_TERMS, last_term: term.abs() })
}

fn check_fractional(alpha: f64, beta: f64) -> Result<()> {
    check_param(alpha > 0.0 && alpha <= 1.0, "alpha", || format!("must lie in (0, 1], got {alpha}"))?;
    check_param(beta > 0.0 && beta <= 1.0, "beta", || format!("must lie in (0, 1], got {beta}"))
}

/// Havriliak-Negami kernel `ω_{α,β}(t) = t^{αβ-1} E^β_{α,αβ}(-t^α)`.
pub fn hn_kernel(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    check_fractional(alpha, beta)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("hn_kernel needs t > 0, got {t}")));
    }
    PrabhakarParams::new(alpha, alpha * beta, beta)?.e_fn(t)
}

/// `∫_0^t ω_{α,β}(t-s) s^k ds = k! · t^{αβ+k} E^β_{α,αβ+k+1}(-t^α)`.
pub fn prabhakar_integral_monomial(alpha: f64, beta: f64, k: u32, t: f64) -> Result<f64> {
    check_fractional(alpha, beta)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("prabhakar integral needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    let params = PrabhakarParams::new(alpha, alpha * beta + kf + 1.0, beta)?;
    Ok(gamma(kf + 1.0) * params.e_fn(t)?)
}
