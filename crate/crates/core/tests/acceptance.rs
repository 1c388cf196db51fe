//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hnmx::cm_check::{default_grid, failing_counts, sweep_grid, SumMode, SweepSpec};
use hnmx::cq_weights::{cm2_weights, delta_consistency_residual, Scheme};
use hnmx::hn_stepper::{energy_experiment, run_convergence, step_count, ConvergenceMode, HnParams};
use hnmx::maxwell_fem::{assemble, discrete_gradient, MaxwellMesh};
use hnmx::special_fn::{hn_kernel, ml3, prabhakar_integral_monomial, PrabhakarParams};
use rayon::prelude::*;

type Outcome = hnmx::Result<(bool, String)>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f()?;
    let el = start.elapsed();
    let in_time = el < limit;
    Ok((ok && in_time, format!("{detail}; runtime {:.2}s (limit {}s)", el.as_secs_f64(), limit.as_secs())))
}

fn fmt_list(v: &[f64], prec: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.prec$}")).collect();
    format!("[{}]", parts.join(", "))
}

fn quadrature_order() -> Outcome {
    let taus = [0.1, 0.05, 0.025];
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in [(0.1, 0.1), (0.5, 0.5), (0.9, 0.9)] {
        let exact = prabhakar_integral_monomial(a, b, 3, 1.0)?;
        let mut errs = Vec::new();
        for tau in taus {
            let n = step_count(1.0, tau)?;
            let w = cm2_weights(a, b, tau, n)?;
            let u: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powi(3)).collect();
            errs.push((w.convolve_last(&u) - exact).abs());
        }
        let ratios: Vec<f64> = errs.windows(2).map(|e| e[0] / e[1]).collect();
        ok &= ratios.iter().all(|r| (3.4..=4.6).contains(r));
        parts.push(format!("({a},{b}) ratios {}", fmt_list(&ratios, 3)));
    }
    Ok((ok, parts.join("; ")))
}

fn sweep(scheme: Scheme) -> hnmx::Result<Vec<hnmx::cm_check::GridCell>> {
    let grid = default_grid(0.05);
    assert_eq!(grid.len(), 19);
    sweep_grid(&SweepSpec {
        scheme,
        alphas: grid.clone(),
        betas: grid,
        tau: 0.01,
        j_max: 1000,
        k_max: 3,
        mode: SumMode::Compensated,
    })
}

fn complete_monotonicity() -> Outcome {
    let cells = sweep(Scheme::Cm2)?;
    let mins: Vec<f64> =
        (0..=3).map(|k| cells.iter().map(|c| c.report.indices[k]).fold(f64::INFINITY, f64::min)).collect();
    let ok = cells.len() == 361 && mins.iter().all(|&m| m >= -1e-13);
    Ok((ok, format!("{} cells, min Index_k for k=0..3 [{}]", cells.len(), mins.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(", "))))
}

fn bdf2_failure() -> Outcome {
    let cells = sweep(Scheme::Bdf2)?;
    let counts = failing_counts(&cells, -1e-8);
    let tail = &counts[1..];
    let ok = tail.iter().all(|&c| c > 0) && tail.windows(2).all(|w| w[0] <= w[1]);
    Ok((ok, format!("cells with Index_k < -1e-8 for k=0..3: {counts:?}")))
}

fn consistency() -> Outcome {
    let mut ratios = Vec::new();
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        ratios.push(delta_consistency_residual(a, 0.1)?.abs() / delta_consistency_residual(a, 0.05)?.abs());
    }
    let spot = delta_consistency_residual(0.5, 0.1)?;
    let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r)) && (spot + 3.094e-3).abs() <= 1e-6;
    Ok((ok, format!("ratios alpha=0.1..0.9 {}; spot {spot:.6e}", fmt_list(&ratios, 4))))
}

fn energy_decay() -> Outcome {
    let mesh = MaxwellMesh::new(32, 32)?;
    let pairs: Vec<(f64, f64)> =
        [0.1, 0.3, 0.5, 0.7, 0.9].iter().flat_map(|&a| [0.1, 0.4, 0.7, 1.0].map(|b| (a, b))).collect();
    let worst = |tau: f64, m: &MaxwellMesh| -> hnmx::Result<(bool, f64)> {
        let n = step_count(1.0, tau)?;
        let res = pairs
            .par_iter()
            .map(|&(a, b)| {
                let trace = energy_experiment(m, HnParams::new(1.0, 1.0, a, b)?, tau, n)?;
                let tot = trace.totals();
                let inc = tot.windows(2).map(|w| (w[1] - w[0]) / tot[0]).fold(f64::NEG_INFINITY, f64::max);
                Ok((tot.len() == n + 1, inc))
            })
            .collect::<hnmx::Result<Vec<_>>>()?;
        let complete = res.iter().all(|r| r.0);
        Ok((complete, res.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max)))
    };
    let (full, fine) = worst(0.01, &mesh)?;
    let (full_coarse, coarse) = worst(0.5, &mesh)?;
    let ok = full && full_coarse && fine <= 1e-10 && coarse <= 1e-10;
    Ok((ok, format!("20 pairs, max (E^n - E^(n-1))/E^0: tau=0.01 {fine:.3e}, tau=0.5 {coarse:.3e}")))
}

fn temporal_convergence() -> Outcome {
    let mesh = MaxwellMesh::new(64, 64)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in [(0.1, 0.1), (0.5, 0.5), (0.5, 1.0)] {
        let rep = run_convergence(
            &mesh,
            HnParams::new(1.0, 1.0, a, b)?,
            &[0.1, 0.05, 0.025],
            1.0,
            ConvergenceMode::VsReference { tau_ref: 1.0 / 320.0 },
        )?;
        let rates = rep.rates_e()?;
        ok &= rates.len() == 2 && rates.iter().all(|r| (1.8..=2.2).contains(r));
        parts.push(format!("({a},{b}) E-rates {}", fmt_list(&rates, 3)));
    }
    Ok((ok, parts.join("; ")))
}

fn special_functions() -> Outcome {
    let p = PrabhakarParams::new(1.0, 1.0, 1.0)?;
    let mut e1: f64 = 0.0;
    for i in 0..41 {
        let z = -2.0 + 0.1 * i as f64;
        e1 = e1.max((ml3(p, z)? - z.exp()).abs() / z.exp());
    }
    let mut e2: f64 = 0.0;
    for i in 0..50 {
        let t = 0.1 + 0.1 * i as f64;
        e2 = e2.max((hn_kernel(1.0, 1.0, t)? - (-t).exp()).abs() / (-t).exp());
    }
    Ok((e1 <= 1e-12 && e2 <= 1e-12, format!("max rel err exp {e1:.2e}, kernel {e2:.2e}")))
}

fn structural() -> Outcome {
    let mesh = MaxwellMesh::new(5, 4)?;
    let cg = assemble(&mesh).c_full.matmul(&discrete_gradient(&mesh));
    let zero = cg.triplets().iter().all(|&(_, _, v)| v == 0.0);
    let mesh = MaxwellMesh::new(16, 16)?;
    let tot = energy_experiment(&mesh, HnParams::new(1.0, 0.0, 0.5, 0.5)?, 0.01, 100)?.totals();
    let drift = tot.iter().map(|e| (e - tot[0]).abs() / tot[0]).fold(0.0, f64::max);
    Ok((zero && tot.len() == 101 && drift <= 1e-12, format!("C*G exactly zero: {zero}; energy drift {drift:.2e}")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 quadrature order", Box::new(|| timed(Duration::from_secs(1), quadrature_order))),
        ("2 complete monotonicity", Box::new(|| timed(Duration::from_secs(30), complete_monotonicity))),
        ("3 BDF2 monotonicity failure", Box::new(bdf2_failure)),
        ("4 consistency residual", Box::new(consistency)),
        ("5 energy decay", Box::new(|| timed(Duration::from_secs(120), energy_decay))),
        ("6 temporal convergence", Box::new(|| timed(Duration::from_secs(300), temporal_convergence))),
        ("7 special functions", Box::new(special_functions)),
        ("8 structural FEM", Box::new(structural)),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!("{} criterion {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
