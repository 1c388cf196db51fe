use std::f64::consts::PI;
use std::sync::Arc;

use super::HnParams;
use crate::error::Result;
use crate::special_fn::prabhakar_integral_monomial;

pub type TimeFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// One `time(t) · space(x, y)` product.
#[derive(Clone)]
pub struct Separable<S> {
    pub time: TimeFn,
    pub space: S,
}

impl<S> Separable<S> {
    pub fn new(time: impl Fn(f64) -> Result<f64> + Send + Sync + 'static, space: S) -> Self {
        Self { time: Arc::new(time), space }
    }
}

/// Right-hand sides of the Ampère (`g1`), Faraday (`g2`) and constitutive
/// (`g3`) equations, each a sum of separable terms. Keeping the time and
/// space factors apart lets the stepper assemble every spatial load once.
#[derive(Clone, Default)]
pub struct SourceSet {
    pub g1: Vec<Separable<VectorFn>>,
    pub g2: Vec<Separable<ScalarFn>>,
    pub g3: Vec<Separable<VectorFn>>,
}

impl std::fmt::Debug for SourceSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceSet")
            .field("g1_terms", &self.g1.len())
            .field("g2_terms", &self.g2.len())
            .field("g3_terms", &self.g3.len())
            .finish()
    }
}

fn eval_vector(terms: &[Separable<VectorFn>], x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
    let mut v = [0.0; 2];
    for term in terms {
        let s = (term.time)(t)?;
        let f = (term.space)(x, y);
        v[0] += s * f[0];
        v[1] += s * f[1];
    }
    Ok(v)
}

impl SourceSet {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.g1.is_empty() && self.g2.is_empty() && self.g3.is_empty()
    }

    pub fn g1(&self, x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
        eval_vector(&self.g1, x, y, t)
    }

    pub fn g2(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        self.g2.iter().map(|term| Ok((term.time)(t)? * (term.space)(x, y))).sum()
    }

    pub fn g3(&self, x: f64, y: f64, t: f64) -> Result<[f64; 2]> {
        eval_vector(&self.g3, x, y, t)
    }
}

/// Spatial profile of the smooth test field `E = t³ Ê`.
pub fn e_hat(x: f64, y: f64) -> [f64; 2] {
    [(x * x + 1.0) * (PI * y).sin(), (PI * x).sin() * (y - 0.5)]
}

/// Spatial profile of `P = (1 − e^{−t}) P̂`.
pub fn p_hat(x: f64, y: f64) -> [f64; 2] {
    [(x * x + 1.0) * y * (y - 1.0), x * (x - 1.0) * (y - 0.5)]
}

/// Spatial profile of `H = e^{−t} Ĥ`.
pub fn h_hat(x: f64, y: f64) -> f64 {
    (x.powi(3) + 1.0) * (y.powi(3) + 1.0)
}

/// `(∂y Ĥ, −∂x Ĥ)`.
fn curl_h_hat(x: f64, y: f64) -> [f64; 2] {
    [3.0 * y * y * (x.powi(3) + 1.0), -3.0 * x * x * (y.powi(3) + 1.0)]
}

/// `∂x Ê₂ − ∂y Ê₁`.
fn curl_e_hat(x: f64, y: f64) -> f64 {
    PI * (PI * x).cos() * (y - 0.5) - (x * x + 1.0) * PI * (PI * y).cos()
}

/// Exact smooth solution used for convergence studies.
#[derive(Debug, Clone, Copy)]
pub struct Manufactured;

impl Manufactured {
    pub fn e(x: f64, y: f64, t: f64) -> [f64; 2] {
        let s = t.powi(3);
        let v = e_hat(x, y);
        [s * v[0], s * v[1]]
    }

    pub fn p(x: f64, y: f64, t: f64) -> [f64; 2] {
        let s = -(-t).exp_m1();
        let v = p_hat(x, y);
        [s * v[0], s * v[1]]
    }

    pub fn h(x: f64, y: f64, t: f64) -> f64 {
        (-t).exp() * h_hat(x, y)
    }
}

/// Sources that make [`Manufactured`] an exact solution of the
/// Havriliak-Negami Maxwell system with parameters `params`.
pub fn manufactured_sources(params: &HnParams) -> SourceSet {
    let HnParams { eps_inf, delta_eps, alpha, beta } = *params;
    let p_hat_fn: VectorFn = Arc::new(p_hat);
    let e_hat_fn: VectorFn = Arc::new(e_hat);
    let neg_e_hat: VectorFn = Arc::new(|x, y| {
        let v = e_hat(x, y);
        [-v[0], -v[1]]
    });
    let neg_curl_h: VectorFn = Arc::new(|x, y| {
        let v = curl_h_hat(x, y);
        [-v[0], -v[1]]
    });
    SourceSet {
        g1: vec![
            Separable::new(move |t| Ok(3.0 * eps_inf * t * t), e_hat_fn),
            Separable::new(|t: f64| Ok((-t).exp()), p_hat_fn.clone()),
            Separable::new(|t: f64| Ok((-t).exp()), neg_curl_h),
        ],
        g2: vec![
            Separable::new(|t: f64| Ok(-(-t).exp()), Arc::new(h_hat) as ScalarFn),
            Separable::new(|t: f64| Ok(t.powi(3)), Arc::new(curl_e_hat) as ScalarFn),
        ],
        g3: vec![
            Separable::new(|t: f64| Ok(-(-t).exp_m1()), p_hat_fn),
            Separable::new(
                move |t| Ok(delta_eps * prabhakar_integral_monomial(alpha, beta, 3, t)?),
                neg_e_hat,
            ),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> HnParams {
        HnParams::new(1.0, 1.0, 0.5, 0.5).unwrap()
    }

    #[test]
    fn zero_set() {
        let s = SourceSet::zero();
        assert!(s.is_zero());
        assert_eq!(s.g1(0.3, 0.4, 1.0).unwrap(), [0.0, 0.0]);
        assert!(!manufactured_sources(&params()).is_zero());
    }

    #[test]
    fn faraday_source_at_start() {
        let s = manufactured_sources(&params());
        for (x, y) in [(0.1, 0.2), (0.5, 0.5), (0.9, 0.7)] {
            assert!((s.g2(x, y, 0.0).unwrap() + h_hat(x, y)).abs() < 1e-15);
        }
    }

    #[test]
    fn constitutive_source_at_start() {
        let s = manufactured_sources(&params());
        assert_eq!(s.g3(0.3, 0.8, 0.0).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn derivatives_by_finite_differences() {
        let s = manufactured_sources(&params());
        let (x, y, t, d) = (0.31, 0.67, 0.8, 1e-5);
        let dt = |f: &dyn Fn(f64) -> f64| (f(t + d) - f(t - d)) / (2.0 * d);
        let dx = |f: &dyn Fn(f64) -> f64| (f(x + d) - f(x - d)) / (2.0 * d);
        let dy = |f: &dyn Fn(f64) -> f64| (f(y + d) - f(y - d)) / (2.0 * d);
        let g1 = s.g1(x, y, t).unwrap();
        for c in 0..2 {
            let dte = dt(&|tt| Manufactured::e(x, y, tt)[c]);
            let dtp = dt(&|tt| Manufactured::p(x, y, tt)[c]);
            let curl_h = if c == 0 {
                dy(&|yy| Manufactured::h(x, yy, t))
            } else {
                -dx(&|xx| Manufactured::h(xx, y, t))
            };
            assert!((g1[c] - (dte + dtp - curl_h)).abs() < 1e-8);
        }
        let curl_e = dx(&|xx| Manufactured::e(xx, y, t)[1]) - dy(&|yy| Manufactured::e(x, yy, t)[0]);
        let dth = dt(&|tt| Manufactured::h(x, y, tt));
        assert!((s.g2(x, y, t).unwrap() - (dth + curl_e)).abs() < 1e-8);
    }

    #[test]
    fn constitutive_source_against_quadrature() {
        // the convolution with r = t − s = u^{1/(αβ)}, which removes the
        // kernel singularity at r = 0
        use crate::special_fn::hn_kernel;
        let p = params();
        let s = manufactured_sources(&p);
        let (x, y, t) = (0.5, 0.5, 1.0f64);
        let ab = p.alpha * p.beta;
        let n = 20_000;
        let umax = t.powf(ab);
        let mut conv = 0.0;
        for i in 0..n {
            // midpoint rule in u; ds = u^{1/ab - 1}/ab du
            let u = (i as f64 + 0.5) / n as f64 * umax;
            let r = u.powf(1.0 / ab);
            let jac = u.powf(1.0 / ab - 1.0) / ab;
            conv += hn_kernel(p.alpha, p.beta, r).unwrap() * (t - r).powi(3) * jac;
        }
        conv *= umax / n as f64;
        let eh = e_hat(x, y);
        let ph = p_hat(x, y);
        let g3 = s.g3(x, y, t).unwrap();
        for c in 0..2 {
            let expect = -(-t).exp_m1() * ph[c] - p.delta_eps * conv * eh[c];
            assert!((g3[c] - expect).abs() < 1e-7, "{} vs {}", g3[c], expect);
        }
    }
}
