//! Convolution-quadrature weights for the Havriliak-Negami kernel.
//!
//! The convolution `∫_0^{t_n} ω_{α,β}(t_n − s) u(s) ds` is replaced by
//! `Σ_{k=0}^{n} w_{n−k} u(t_k)`, where the weights are the Taylor
//! coefficients of a generating function `w(ζ)`.
//!
//! * [`Scheme::Cm2`] uses
//!   `w(ζ) = [1 + ((1−ζ)/τ)^α · c^{1−α} · (1 − dζ)^{1−α}]^{−β}` with
//!   `c = (2−α)/(2−2α)` and `d = α/(2−α)`. The sequence is completely
//!   monotone and the quadrature is second order.
//! * [`Scheme::Bdf1`] / [`Scheme::Bdf2`] are classical Lubich weights
//!   `w(ζ) = (1 + (δ(ζ)/τ)^α)^{−β}` with the BDF-p symbol `δ(ζ)`. BDF-2 is
//!   second order but its weights are not completely monotone.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_param, Error, Result};
use crate::series::binom_series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Cm2,
    Bdf1,
    Bdf2,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Cm2 => "cm2",
            Scheme::Bdf1 => "bdf1",
            Scheme::Bdf2 => "bdf2",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm2" => Ok(Scheme::Cm2),
            "bdf1" | "bdf1-cq" => Ok(Scheme::Bdf1),
            "bdf2" | "bdf2-cq" => Ok(Scheme::Bdf2),
            other => Err(Error::Config {
                field: "scheme".into(),
                reason: format!("unknown scheme `{other}` (expected cm2, bdf1 or bdf2)"),
            }),
        }
    }
}

/// Constants of the perturbed generating function for a given `α ∈ (0,1)`.
///
/// `G(ζ) = −γ₁ζ − γ₀ = c(1 − dζ)` with `γ₀ + γ₁ = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cm2Constants {
    pub c: f64,
    pub d: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl Cm2Constants {
    pub fn new(alpha: f64) -> Result<Self> {
        check_param(alpha > 0.0 && alpha < 1.0, "alpha", || {
            format!("cm2 weights need 0 < alpha < 1, got {alpha}")
        })?;
        let c = (2.0 - alpha) / (2.0 - 2.0 * alpha);
        Ok(Self {
            c,
            d: alpha / (2.0 - alpha),
            gamma0: -c,
            gamma1: alpha / (2.0 - 2.0 * alpha),
        })
    }
}

/// A weight table `w_0 … w_N` together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CqWeights {
    pub scheme: Scheme,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub weights: Vec<f64>,
}

impl CqWeights {
    pub fn generate(scheme: Scheme, alpha: f64, beta: f64, tau: f64, n: usize) -> Result<Self> {
        match scheme {
            Scheme::Cm2 => cm2_weights(alpha, beta, tau, n),
            Scheme::Bdf1 => bdf_cq_weights(1, alpha, beta, tau, n),
            Scheme::Bdf2 => bdf_cq_weights(2, alpha, beta, tau, n),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_{k=0}^{n} w_{n−k} u_k` for `n = u.len() − 1`.
    pub fn convolve_last(&self, u: &[f64]) -> f64 {
        let n = u.len() - 1;
        assert!(n < self.weights.len(), "weight table shorter than history");
        u.iter().enumerate().map(|(k, uk)| self.weights[n - k] * uk).sum()
    }

    /// CSV with columns `j,w_j`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,w_j\n");
        for (j, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("{j},{w:.17e}\n"));
        }
        out
    }
}

fn check_tau(tau: f64) -> Result<()> {
    check_param(tau > 0.0 && tau.is_finite(), "tau", || format!("must be > 0, got {tau}"))
}

/// Second-order completely monotone weights.
///
/// `β = 1` is accepted (Cole-Cole runs); `α = 1` is not, since `c` is
/// singular there. Route `α = 1` to [`Scheme::Bdf1`].
pub fn cm2_weights(alpha: f64, beta: f64, tau: f64, n: usize) -> Result<CqWeights> {
    let k = Cm2Constants::new(alpha)?;
    check_param(beta > 0.0 && beta <= 1.0, "beta", || format!("must lie in (0, 1], got {beta}"))?;
    check_tau(tau)?;

    let scale = tau.powf(-alpha) * k.c.powf(1.0 - alpha);
    let b = binom_series(alpha, 1.0, n)
        .try_mul(&binom_series(1.0 - alpha, k.d, n))?
        .scaled(scale);
    let weights = b.plus_constant(1.0).powf(-beta)?.into_coeffs();
    Ok(CqWeights { scheme: Scheme::Cm2, alpha, beta, tau, weights })
}

/// Lubich weights of `(1 + (δ(ζ)/τ)^α)^{−β}` with BDF-1 or BDF-2 `δ`.
pub fn bdf_cq_weights(order: u8, alpha: f64, beta: f64, tau: f64, n: usize) -> Result<CqWeights> {
    check_param(alpha > 0.0 && alpha <= 1.0, "alpha", || format!("must lie in (0, 1], got {alpha}"))?;
    check_param(beta > 0.0 && beta <= 1.0, "beta", || format!("must lie in (0, 1], got {beta}"))?;
    check_tau(tau)?;
    let (scheme, delta) = match order {
        1 => (Scheme::Bdf1, binom_series(1.0, 1.0, n)),
        2 => {
            // (1 − ζ) + (1 − ζ)²/2
            let one = binom_series(1.0, 1.0, n);
            let two = binom_series(2.0, 1.0, n).scaled(0.5);
            (Scheme::Bdf2, &one + &two)
        }
        other => {
            return Err(Error::InvalidParameter {
                name: "order",
                reason: format!("BDF order must be 1 or 2, got {other}"),
            })
        }
    };
    let weights = delta
        .scaled(1.0 / tau)
        .powf(alpha)?
        .plus_constant(1.0)
        .powf(-beta)?
        .into_coeffs();
    Ok(CqWeights { scheme, alpha, beta, tau, weights })
}

/// `τ⁻¹(1 − e^{−τ})·(c(1 − d e^{−τ}))^{(1−α)/α} − 1`, the consistency defect
/// of the modified symbol `δ(ζ) = (1−ζ) G(ζ)^{(1−α)/α}`. It is `O(τ²)`.
pub fn delta_consistency_residual(alpha: f64, tau: f64) -> Result<f64> {
    let k = Cm2Constants::new(alpha)?;
    check_tau(tau)?;
    let z = (-tau).exp();
    let lead = -(-tau).exp_m1() / tau;
    let g = k.c * (1.0 - k.d * z);
    Ok(lead * g.powf((1.0 - alpha) / alpha) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TruncatedSeries;

    #[test]
    fn constants_satisfy_identities() {
        for i in 1..20 {
            let alpha = i as f64 * 0.05;
            let k = Cm2Constants::new(alpha).unwrap();
            assert!((k.gamma0 + k.gamma1 + 1.0).abs() < 1e-14);
            assert!(k.gamma1 >= 0.0 && k.c > 0.0 && k.d > 0.0 && k.d < 1.0);
            // c(1 − dζ) = −γ₁ζ − γ₀
            assert!((k.c * k.d - k.gamma1).abs() < 1e-13);
        }
        assert!(Cm2Constants::new(1.0).is_err());
        assert!(Cm2Constants::new(0.0).is_err());
    }

    #[test]
    fn cm2_small_table() {
        // 50-digit series composition
        let w = cm2_weights(0.5, 1.0, 1.0, 2).unwrap().weights;
        let expect = [0.449_489_742_783_178_1, 0.164_965_809_277_260_33, 0.074_290_730_837_908_87];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn cm2_leading_weight() {
        for &(alpha, beta, tau) in &[(0.3, 0.6, 0.1), (0.9, 1.0, 0.01), (0.05, 0.05, 1.0)] {
            let w = cm2_weights(alpha, beta, tau, 0).unwrap().weights;
            assert_eq!(w.len(), 1);
            let c: f64 = (2.0 - alpha) / (2.0 - 2.0 * alpha);
            let expect = (1.0 + tau.powf(-alpha) * c.powf(1.0 - alpha)).powf(-beta);
            assert!((w[0] - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn cm2_rejects_bad_parameters() {
        assert!(cm2_weights(1.0, 0.5, 0.1, 4).is_err());
        assert!(cm2_weights(0.5, 0.0, 0.1, 4).is_err());
        assert!(cm2_weights(0.5, 1.5, 0.1, 4).is_err());
        assert!(cm2_weights(0.5, 0.5, 0.0, 4).is_err());
    }

    #[test]
    fn bdf1_geometric() {
        let w = bdf_cq_weights(1, 1.0, 1.0, 1.0, 2).unwrap().weights;
        assert_eq!(w, vec![0.5, 0.25, 0.125]);
        let w = bdf_cq_weights(1, 0.4, 0.7, 0.05, 0).unwrap().weights;
        assert!((w[0] - (1.0 + 0.05f64.powf(-0.4)).powf(-0.7)).abs() < 1e-15);
        assert!(bdf_cq_weights(3, 0.5, 0.5, 0.1, 3).is_err());
    }

    #[test]
    fn bdf1_matches_cm2_structure_at_alpha_one() {
        // At α = 1 the perturbation G^{1−α} disappears: w = (1 + (1−ζ)/τ)^{−β}.
        let tau = 0.2;
        let w = bdf_cq_weights(1, 1.0, 0.6, tau, 8).unwrap().weights;
        let direct = TruncatedSeries::from_coeffs(vec![1.0 + 1.0 / tau, -1.0 / tau, 0., 0., 0., 0., 0., 0., 0.])
            .unwrap()
            .powf(-0.6)
            .unwrap();
        for (a, b) in w.iter().zip(direct.coeffs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn consistency_residual_spot_values() {
        // direct 40-digit evaluation
        let r1 = delta_consistency_residual(0.5, 0.1).unwrap();
        assert!((r1 - (-3.094_595_329_282_17e-3)).abs() < 1e-15, "{r1}");
        let r2 = delta_consistency_residual(0.5, 0.05).unwrap();
        assert!((r2 - (-8.027_996_689_646_32e-4)).abs() < 1e-15, "{r2}");
        assert!((r1 / r2 - 3.85).abs() < 0.01);
        assert!(delta_consistency_residual(0.5, 1e-6).unwrap().abs() < 1e-10);
    }

    #[test]
    fn convolution_helper() {
        let w = CqWeights { scheme: Scheme::Cm2, alpha: 0.5, beta: 0.5, tau: 1.0, weights: vec![3.0, 2.0, 1.0] };
        assert_eq!(w.convolve_last(&[1.0, 10.0, 100.0]), 1.0 + 20.0 + 300.0);
        assert!(w.to_csv().starts_with("j,w_j\n0,"));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::Cm2, Scheme::Bdf1, Scheme::Bdf2] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("rk4".parse::<Scheme>().is_err());
    }
}
