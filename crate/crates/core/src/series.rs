//! Truncated formal power series in one variable.
//!
//! All arithmetic is O(N²) direct convolution, which is plenty for the
//! few-thousand-term generating functions used by the quadrature weights.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Coefficients `c_0 … c_N` of a power series truncated after `ζ^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                reason: "a truncated series needs at least one coefficient".into(),
            });
        }
        Ok(Self { coeffs })
    }

    /// The constant series `value` truncated at order `n`.
    pub fn constant(value: f64, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
        self
    }

    pub fn plus_constant(mut self, value: f64) -> Self {
        self.coeffs[0] += value;
        self
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::LengthMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..n)
            .map(|m| (0..=m).map(|k| a[k] * b[m - k]).sum())
            .collect();
        Ok(Self { coeffs })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    /// `f^γ` by the J.C.P. Miller recurrence
    /// `h_n = 1/(n f_0) · Σ_{k=1..n} ((γ+1)k − n) f_k h_{n−k}`, `h_0 = f_0^γ`.
    pub fn powf(&self, gamma: f64) -> Result<Self> {
        let f = &self.coeffs;
        let f0 = f[0];
        if !(f0 > 0.0) {
            return Err(Error::BranchPoint(f0));
        }
        let n = f.len();
        let mut h = Vec::with_capacity(n);
        h.push(f0.powf(gamma));
        for m in 1..n {
            let mf = m as f64;
            let s: f64 = (1..=m)
                .map(|k| ((gamma + 1.0) * k as f64 - mf) * f[k] * h[m - k])
                .sum();
            h.push(s / (mf * f0));
        }
        Ok(Self { coeffs: h })
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Panics on mismatched truncation orders; use [`TruncatedSeries::try_mul`]
    /// to get an error instead.
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.try_mul(rhs).expect("series truncation orders differ")
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        self.try_add(rhs).expect("series truncation orders differ")
    }
}

/// Coefficients of `(1 − scale·ζ)^exponent` up to `ζ^n`.
pub fn binom_series(exponent: f64, scale: f64, n: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    for j in 1..=n {
        let jf = j as f64;
        let prev = coeffs[j - 1];
        coeffs.push(prev * scale * (jf - 1.0 - exponent) / jf);
    }
    TruncatedSeries { coeffs }
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.try_mul(b)
}

pub fn series_pow(f: &TruncatedSeries, gamma: f64) -> Result<TruncatedSeries> {
    f.powf(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(c.to_vec()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).abs() <= tol, "coeff {i}: {x} vs {y}");
        }
    }

    #[test]
    fn empty_series_rejected() {
        assert!(TruncatedSeries::from_coeffs(vec![]).is_err());
    }

    #[test]
    fn binomial_expansions() {
        assert_eq!(binom_series(1.0, 1.0, 3).coeffs(), &[1.0, -1.0, 0.0, 0.0]);
        assert_close(binom_series(0.5, 1.0, 2).coeffs(), &[1.0, -0.5, -0.125], 1e-16);
        assert_close(binom_series(0.5, 1.0 / 3.0, 2).coeffs(), &[1.0, -1.0 / 6.0, -1.0 / 72.0], 1e-16);
    }

    #[test]
    fn binomial_against_product() {
        // (1-ζ)^{1/2} squared is (1-ζ)
        let h = binom_series(0.5, 1.0, 12);
        let sq = &h * &h;
        let mut expect = vec![0.0; 13];
        expect[0] = 1.0;
        expect[1] = -1.0;
        assert_close(sq.coeffs(), &expect, 1e-15);
    }

    #[test]
    fn products() {
        assert_eq!((&s(&[1.0, -1.0]) * &s(&[1.0, -1.0])).coeffs(), &[1.0, -2.0]);
        assert_eq!((&s(&[1.0, 0.0, 0.0]) * &s(&[0.0, 1.0, 0.0])).coeffs(), &[0.0, 1.0, 0.0]);
        let p = series_mul(&binom_series(0.5, 1.0, 2), &binom_series(0.5, 1.0 / 3.0, 2)).unwrap();
        assert_close(p.coeffs(), &[1.0, -2.0 / 3.0, -1.0 / 18.0], 1e-16);
    }

    #[test]
    fn mismatched_orders() {
        assert!(matches!(
            series_mul(&s(&[1.0]), &s(&[1.0, 2.0])),
            Err(Error::LengthMismatch { left: 0, right: 1 })
        ));
        assert!(s(&[1.0]).try_add(&s(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(series_pow(&s(&[1.0, 1.0]), 2.0).unwrap().coeffs(), &[1.0, 2.0]);
        assert_eq!(series_pow(&s(&[4.0, 0.0, 0.0]), 0.5).unwrap().coeffs(), &[2.0, 0.0, 0.0]);
        // reciprocal, checked against 50-digit long division
        let r = series_pow(&s(&[2.2247449, -0.8164966, -0.0680414]), -1.0).unwrap();
        assert_close(
            r.coeffs(),
            &[0.449_489_737_003_105_39, 0.164_965_808_887_989_69, 0.074_290_734_665_631_31],
            1e-15,
        );
    }

    #[test]
    fn power_needs_positive_constant() {
        assert!(matches!(series_pow(&s(&[0.0, 1.0]), 0.5), Err(Error::BranchPoint(_))));
        assert!(matches!(series_pow(&s(&[-1.0, 1.0]), 2.0), Err(Error::BranchPoint(_))));
    }

    proptest! {
        #[test]
        fn pow_round_trip(
            c0 in 0.5f64..3.0,
            tail in prop::collection::vec(-1.0f64..1.0, 1..24),
            gamma in prop_oneof![-2.5f64..-0.2, 0.2f64..2.5],
        ) {
            // geometric damping keeps the radius of convergence above 1
            let mut coeffs = vec![c0];
            coeffs.extend(tail.iter().enumerate().map(|(k, t)| t * 0.4f64.powi(k as i32 + 1)));
            let f = TruncatedSeries::from_coeffs(coeffs).unwrap();
            let back = f.powf(gamma).unwrap().powf(1.0 / gamma).unwrap();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "{} vs {}", a, b);
            }
        }

        #[test]
        fn pow_is_multiplicative(
            c0 in 0.5f64..2.0,
            tail in prop::collection::vec(-0.5f64..0.5, 1..16),
        ) {
            let mut coeffs = vec![c0];
            coeffs.extend(tail);
            let f = TruncatedSeries::from_coeffs(coeffs).unwrap();
            let cubed = f.powf(3.0).unwrap();
            let direct = &(&f * &f) * &f;
            for (a, b) in cubed.coeffs().iter().zip(direct.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()));
            }
        }
    }
}
