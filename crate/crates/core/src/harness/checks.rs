//! Pass/fail checks behind `--check`.

use std::fmt;

use crate::cm_check::GridCell;
use crate::cq_weights::{cm2_weights, delta_consistency_residual};
use crate::error::Result;
use crate::hn_stepper::{energy_experiment, EnergyTrace, ErrorReport, HnParams};
use crate::maxwell_fem::{assemble, discrete_gradient, MaxwellMesh};
use crate::special_fn::{hn_kernel, ml3, prabhakar_integral_monomial, PrabhakarParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(label: impl Into<String>, passed: bool, detail: String) -> Self {
        Self { label: label.into(), passed, detail }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.label, self.detail)
    }
}

/// Error of the CM2 convolution of `s³` at `t = 1` against the exact
/// `∫₀¹ ω(1−s) s³ ds`.
pub fn cubic_quadrature_error(alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    let n = crate::hn_stepper::step_count(1.0, tau)?;
    let w = cm2_weights(alpha, beta, tau, n)?;
    let u: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powi(3)).collect();
    let exact = prabhakar_integral_monomial(alpha, beta, 3, 1.0)?;
    Ok((w.convolve_last(&u) - exact).abs())
}

/// Successive error ratios of the cubic quadrature test must lie in
/// `[3.4, 4.6]`.
pub fn quadrature_order(pairs: &[(f64, f64)], taus: &[f64]) -> Result<CheckOutcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(a, b) in pairs {
        let errs = taus.iter().map(|&t| cubic_quadrature_error(a, b, t)).collect::<Result<Vec<_>>>()?;
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        ok &= ratios.iter().all(|r| (3.4..=4.6).contains(r));
        let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
        parts.push(format!("({a},{b}) ratios [{}]", shown.join(", ")));
    }
    Ok(CheckOutcome::new("quadrature order", ok, parts.join("; ")))
}

/// Halving ratios of the consistency residual in `[3.5, 4.5]` plus the spot
/// value at `α = 0.5, τ = 0.1`.
pub fn consistency_residual(alphas: &[f64], tau: f64) -> Result<CheckOutcome> {
    let mut ok = true;
    let mut worst: (f64, f64) = (f64::NAN, 4.0);
    for &a in alphas {
        let r = delta_consistency_residual(a, tau)?.abs() / delta_consistency_residual(a, tau / 2.0)?.abs();
        if !(3.5..=4.5).contains(&r) {
            ok = false;
        }
        if worst.0.is_nan() || (r - 4.0).abs() > (worst.1 - 4.0).abs() {
            worst = (a, r);
        }
    }
    let spot = delta_consistency_residual(0.5, 0.1)?;
    let spot_ok = (spot - (-3.094e-3)).abs() <= 1e-6;
    Ok(CheckOutcome::new(
        "consistency residual",
        ok && spot_ok,
        format!("worst ratio {:.4} at alpha={}; residual(0.5, 0.1) = {spot:.6e}", worst.1, worst.0),
    ))
}

/// Every `Index_k` at least `-tol`.
pub fn completely_monotone(cells: &[GridCell], tol: f64) -> CheckOutcome {
    let k_max = cells.first().map_or(0, |c| c.report.k_max);
    let mins: Vec<f64> = (0..=k_max)
        .map(|k| cells.iter().map(|c| c.report.indices[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let ok = !cells.is_empty() && mins.iter().all(|&m| m >= -tol);
    let shown: Vec<String> = mins.iter().map(|m| format!("{m:.3e}")).collect();
    CheckOutcome::new("complete monotonicity", ok, format!("min Index_k over {} cells: [{}]", cells.len(), shown.join(", ")))
}

/// Some cell has `Index_k < threshold` for each `k ≥ 1`, with the number
/// of such cells nondecreasing in `k`.
pub fn monotonicity_breaks(cells: &[GridCell], threshold: f64) -> CheckOutcome {
    let counts = crate::cm_check::failing_counts(cells, threshold);
    let tail = counts.get(1..).unwrap_or(&[]);
    let ok = !tail.is_empty() && tail.iter().all(|&c| c > 0) && tail.windows(2).all(|w| w[0] <= w[1]);
    CheckOutcome::new("monotonicity failure", ok, format!("cells below {threshold:e} per k: {counts:?}"))
}

/// `E^1_{1,1}(z) = eᶻ` on `[−2, 2]` and `ω_{1,1}(t) = e^{−t}` on `[0.1, 5]`.
pub fn special_function_identities() -> Result<CheckOutcome> {
    let p = PrabhakarParams::new(1.0, 1.0, 1.0)?;
    let mut worst_exp: f64 = 0.0;
    for i in 0..41 {
        let z = -2.0 + 0.1 * i as f64;
        worst_exp = worst_exp.max((ml3(p, z)? - z.exp()).abs() / z.exp());
    }
    let mut worst_kernel: f64 = 0.0;
    for i in 0..50 {
        let t = 0.1 + 0.1 * i as f64;
        worst_kernel = worst_kernel.max((hn_kernel(1.0, 1.0, t)? - (-t).exp()).abs() / (-t).exp());
    }
    Ok(CheckOutcome::new(
        "special functions",
        worst_exp <= 1e-12 && worst_kernel <= 1e-12,
        format!("max rel err exp {worst_exp:.2e}, Debye kernel {worst_kernel:.2e}"),
    ))
}

/// `𝔼ⁿ − 𝔼ⁿ⁻¹ ≤ tol·𝔼⁰` for every trace.
pub fn energy_decay(traces: &[(String, EnergyTrace)], tol: f64) -> CheckOutcome {
    let ok = !traces.is_empty() && traces.iter().all(|(_, t)| t.is_decaying(tol));
    let worst = traces
        .iter()
        .map(|(name, t)| (name.as_str(), t.max_relative_increase()))
        .fold(("", f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    CheckOutcome::new(
        "energy decay",
        ok,
        format!("{} traces, largest relative step change {:.3e} ({})", traces.len(), worst.1, worst.0),
    )
}

/// Zero-source energy runs at `τ = 0.5` on a coarse mesh.
pub fn large_step_decay(pairs: &[(f64, f64)], tol: f64) -> Result<CheckOutcome> {
    let mesh = MaxwellMesh::new(8, 8)?;
    let traces = pairs
        .iter()
        .map(|&(a, b)| Ok((format!("({a},{b})"), energy_experiment(&mesh, HnParams::new(1.0, 1.0, a, b)?, 0.5, 2)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = energy_decay(&traces, tol);
    out.label = "energy decay, tau = 0.5".into();
    Ok(out)
}

/// Exact `C·G = 0` on 5×4 and nondispersive energy conservation over 100
/// steps on 16×16.
pub fn structural() -> Result<CheckOutcome> {
    let mesh = MaxwellMesh::new(5, 4)?;
    let cg = assemble(&mesh).c_full.matmul(&discrete_gradient(&mesh));
    let exact_zero = cg.triplets().iter().all(|&(_, _, v)| v == 0.0);

    let mesh = MaxwellMesh::new(16, 16)?;
    let trace = energy_experiment(&mesh, HnParams::new(1.0, 0.0, 0.5, 0.5)?, 0.01, 100)?;
    let tot = trace.totals();
    let drift = tot.iter().map(|e| (e - tot[0]).abs() / tot[0]).fold(0.0, f64::max);
    Ok(CheckOutcome::new(
        "structural FEM",
        exact_zero && drift <= 1e-12,
        format!("C*G exactly zero: {exact_zero}; nondispersive energy drift {drift:.2e}"),
    ))
}

/// Observed E-field rates inside `[lo, hi]` for every report.
pub fn rates_within(reports: &[(String, ErrorReport)], lo: f64, hi: f64) -> Result<CheckOutcome> {
    let mut ok = !reports.is_empty();
    let mut parts = Vec::new();
    for (name, rep) in reports {
        let rates = rep.rates_e()?;
        ok &= !rates.is_empty() && rates.iter().all(|r| (lo..=hi).contains(r));
        let shown: Vec<String> = rates.iter().map(|r| format!("{r:.3}")).collect();
        parts.push(format!("{name} E-rates [{}]", shown.join(", ")));
    }
    Ok(CheckOutcome::new("temporal convergence", ok, parts.join("; ")))
}
