use rayon::prelude::*;

use super::{h_hat, manufactured_sources, HnParams, HnStepper, Manufactured, StepperState};
use crate::error::{Error, Result};
use crate::maxwell_fem::{assemble, interpolate_h, l2_error, AssembledOperators, ExactField, MaxwellMesh};

/// How errors are measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceMode {
    /// Against the exact smooth solution, in `L²(Ω)` by quadrature.
    VsExact,
    /// Against a fine-step run on the same mesh, at shared time levels, in
    /// the discrete mass norms.
    VsReference { tau_ref: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub tau: f64,
    pub err_e: f64,
    pub err_h: f64,
    pub err_p: f64,
}

/// Max-over-time errors per step size, coarsest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub mode: ConvergenceMode,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    fn rates_of(&self, f: impl Fn(&ErrorRow) -> f64) -> Result<Vec<f64>> {
        let pairs: Vec<_> = self.rows.iter().map(|r| (r.tau, f(r))).collect();
        observed_rates(&pairs)
    }

    pub fn rates_e(&self) -> Result<Vec<f64>> {
        self.rates_of(|r| r.err_e)
    }

    pub fn rates_h(&self) -> Result<Vec<f64>> {
        self.rates_of(|r| r.err_h)
    }

    pub fn rates_p(&self) -> Result<Vec<f64>> {
        self.rates_of(|r| r.err_p)
    }

    pub fn to_csv(&self) -> Result<String> {
        let (re, rh, rp) = (self.rates_e()?, self.rates_h()?, self.rates_p()?);
        let rate = |v: &[f64], i: usize| if i == 0 { String::new() } else { format!("{:.4}", v[i - 1]) };
        let mut out = String::from("tau,err_E,rate_E,err_H,rate_H,err_P,rate_P\n");
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "{:.10},{:.6e},{},{:.6e},{},{:.6e},{}\n",
                r.tau,
                r.err_e,
                rate(&re, i),
                r.err_h,
                rate(&rh, i),
                r.err_p,
                rate(&rp, i)
            ));
        }
        Ok(out)
    }
}

/// `log₂(err_{i−1}/err_i)` for step sizes halving at every entry.
pub fn observed_rates(errors: &[(f64, f64)]) -> Result<Vec<f64>> {
    for &(tau, err) in errors {
        if !(err > 0.0) {
            return Err(Error::Domain(format!("error at tau = {tau} must be positive, got {err}")));
        }
    }
    errors
        .windows(2)
        .map(|w| {
            let ((t0, e0), (t1, e1)) = (w[0], w[1]);
            if ((t0 / t1) - 2.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter {
                    name: "tau",
                    reason: format!("step sizes must halve, got {t0} then {t1}"),
                });
            }
            Ok((e0 / e1).log2())
        })
        .collect()
}

/// `T / τ` when it is an integer.
pub fn step_count(t_final: f64, tau: f64) -> Result<usize> {
    if !(tau > 0.0 && t_final > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", reason: format!("need tau > 0 and T > 0, got {tau}, {t_final}") });
    }
    let n = t_final / tau;
    let r = n.round();
    if (n - r).abs() > 1e-9 * n.max(1.0) || r < 1.0 {
        return Err(Error::InvalidParameter { name: "tau", reason: format!("T / tau = {n} is not a whole number of steps") });
    }
    Ok(r as usize)
}

/// Stored free-dof fields of a run, one entry every `stride` steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub tau: f64,
    pub stride: usize,
    pub e: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
}

fn simulate(
    mesh: &MaxwellMesh,
    ops: &AssembledOperators,
    params: HnParams,
    tau: f64,
    n_steps: usize,
    mut visit: impl FnMut(&StepperState) -> Result<()>,
) -> Result<()> {
    let sources = manufactured_sources(&params);
    let stepper = HnStepper::new(mesh, ops, params, tau, n_steps, &sources)?;
    let e0 = vec![0.0; mesh.n_edges()];
    let h0 = interpolate_h(mesh, |x, y, _| h_hat(x, y), 0.0);
    let mut state = stepper.initial_state(&e0, h0)?;
    visit(&state)?;
    for _ in 0..n_steps {
        stepper.step(&mut state)?;
        visit(&state)?;
    }
    Ok(())
}

/// Manufactured-solution run keeping every `stride`-th level.
pub fn run_trajectory(
    mesh: &MaxwellMesh,
    ops: &AssembledOperators,
    params: HnParams,
    tau: f64,
    t_final: f64,
    stride: usize,
) -> Result<Trajectory> {
    let n_steps = step_count(t_final, tau)?;
    let mut traj = Trajectory { tau, stride, e: Vec::new(), h: Vec::new(), p: Vec::new() };
    simulate(mesh, ops, params, tau, n_steps, |s| {
        if s.n % stride == 0 {
            traj.e.push(mesh.restrict(&s.fields.e));
            traj.p.push(mesh.restrict(&s.fields.p));
            traj.h.push(s.fields.h.clone());
        }
        Ok(())
    })?;
    Ok(traj)
}

fn exact_errors(mesh: &MaxwellMesh, ops: &AssembledOperators, params: HnParams, tau: f64, t_final: f64) -> Result<ErrorRow> {
    let n_steps = step_count(t_final, tau)?;
    let mut row = ErrorRow { tau, err_e: 0.0, err_h: 0.0, err_p: 0.0 };
    simulate(mesh, ops, params, tau, n_steps, |s| {
        let t = s.time();
        row.err_e = row.err_e.max(l2_error(mesh, &s.fields.e, ExactField::Edge(&Manufactured::e), t));
        row.err_h = row.err_h.max(l2_error(mesh, &s.fields.h, ExactField::Cell(&Manufactured::h), t));
        row.err_p = row.err_p.max(l2_error(mesh, &s.fields.p, ExactField::Edge(&Manufactured::p), t));
        Ok(())
    })?;
    Ok(row)
}

fn ratio(coarse: f64, fine: f64) -> Result<usize> {
    let r = coarse / fine;
    let k = r.round();
    if (r - k).abs() > 1e-9 * r || k < 1.0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: format!("step {coarse} is not a whole multiple of {fine}"),
        });
    }
    Ok(k as usize)
}

fn reference_errors(
    ops: &AssembledOperators,
    coarse: &Trajectory,
    reference: &Trajectory,
    levels_per_step: usize,
) -> ErrorRow {
    let diff_m = |a: &[f64], b: &[f64]| {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        ops.m_e.quad_form(&d).sqrt()
    };
    let diff_h = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).zip(&ops.m_h).map(|((x, y), m)| m * (x - y).powi(2)).sum::<f64>().sqrt()
    };
    let mut row = ErrorRow { tau: coarse.tau, err_e: 0.0, err_h: 0.0, err_p: 0.0 };
    for n in 0..coarse.e.len() {
        let r = n * levels_per_step;
        row.err_e = row.err_e.max(diff_m(&coarse.e[n], &reference.e[r]));
        row.err_h = row.err_h.max(diff_h(&coarse.h[n], &reference.h[r]));
        row.err_p = row.err_p.max(diff_m(&coarse.p[n], &reference.p[r]));
    }
    row
}

/// Max-over-time errors of manufactured-solution runs for each step size
/// in `taus` (coarsest first). Runs are independent and execute in
/// parallel.
pub fn run_convergence(
    mesh: &MaxwellMesh,
    params: HnParams,
    taus: &[f64],
    t_final: f64,
    mode: ConvergenceMode,
) -> Result<ErrorReport> {
    if taus.is_empty() {
        return Err(Error::Config { field: "tau".into(), reason: "need at least one step size".into() });
    }
    for &tau in taus {
        step_count(t_final, tau)?;
    }
    let ops = assemble(mesh);
    let rows = match mode {
        ConvergenceMode::VsExact => taus
            .par_iter()
            .map(|&tau| exact_errors(mesh, &ops, params, tau, t_final))
            .collect::<Result<Vec<_>>>()?,
        ConvergenceMode::VsReference { tau_ref } => {
            let tau_min = taus.iter().copied().fold(f64::INFINITY, f64::min);
            if tau_ref > tau_min / 8.0 * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter {
                    name: "tau_ref",
                    reason: format!("reference step {tau_ref} must be at most min(tau)/8 = {}", tau_min / 8.0),
                });
            }
            let stride = ratio(tau_min, tau_ref)?;
            let per_level = taus.iter().map(|&t| Ok(ratio(t, tau_ref)? / stride)).collect::<Result<Vec<_>>>()?;
            for (&t, &k) in taus.iter().zip(&per_level) {
                if ratio(t, tau_ref)? != k * stride {
                    return Err(Error::InvalidParameter {
                        name: "tau",
                        reason: format!("step {t} is not a whole multiple of {tau_min}"),
                    });
                }
            }
            let runs: Vec<(f64, usize)> =
                std::iter::once((tau_ref, stride)).chain(taus.iter().map(|&t| (t, 1))).collect();
            let trajs = runs
                .par_iter()
                .map(|&(tau, s)| run_trajectory(mesh, &ops, params, tau, t_final, s))
                .collect::<Result<Vec<_>>>()?;
            let (reference, coarse) = trajs.split_first().expect("reference run present");
            coarse.iter().zip(&per_level).map(|(c, &k)| reference_errors(&ops, c, reference, k)).collect()
        }
    };
    Ok(ErrorReport { mode, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_from_errors() {
        let r = observed_rates(&[(0.1, 1e-2), (0.05, 2.5e-3)]).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-12);
        let r = observed_rates(&[(0.2, 4.4878e-3), (0.1, 1.1275e-3), (0.05, 2.8143e-4)]).unwrap();
        assert_eq!(r.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>(), ["1.99", "2.00"]);
        assert_eq!(observed_rates(&[(0.1, 1e-3), (0.05, 1e-3)]).unwrap(), vec![0.0]);
        assert!(observed_rates(&[(0.1, 1e-3), (0.05, 0.0)]).is_err());
        assert!(observed_rates(&[(0.1, 1e-3), (0.03, 1e-4)]).is_err());
    }

    #[test]
    fn whole_step_counts() {
        assert_eq!(step_count(1.0, 0.1).unwrap(), 10);
        assert_eq!(step_count(1.0, 1.0 / 320.0).unwrap(), 320);
        assert!(step_count(1.0, 0.3).is_err());
        assert!(step_count(1.0, 0.0).is_err());
    }

    #[test]
    fn reference_must_be_fine_enough() {
        let mesh = MaxwellMesh::new(4, 4).unwrap();
        let p = HnParams::new(1.0, 1.0, 0.5, 0.5).unwrap();
        let mode = ConvergenceMode::VsReference { tau_ref: 0.05 };
        assert!(run_convergence(&mesh, p, &[0.2, 0.1], 1.0, mode).is_err());
    }

    #[test]
    fn errors_shrink_with_tau() {
        let mesh = MaxwellMesh::new(8, 8).unwrap();
        let p = HnParams::new(1.0, 1.0, 0.5, 0.5).unwrap();
        let rep =
            run_convergence(&mesh, p, &[0.25, 0.125], 1.0, ConvergenceMode::VsReference { tau_ref: 1.0 / 64.0 })
                .unwrap();
        assert!(rep.rows[1].err_e < rep.rows[0].err_e);
        let csv = rep.to_csv().unwrap();
        assert!(csv.starts_with("tau,err_E,rate_E,err_H,rate_H,err_P,rate_P\n"));
        let first: Vec<_> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!((first[2], first[4], first[6]), ("", "", ""));
        let exact = run_convergence(&mesh, p, &[0.25, 0.125], 1.0, ConvergenceMode::VsExact).unwrap();
        assert!(exact.rows.iter().all(|r| r.err_e.is_finite() && r.err_e > 0.0));
    }
}
