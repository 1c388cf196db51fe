//! Energy-stable time stepping for Maxwell's equations in a
//! Havriliak-Negami medium.
//!
//! Each step is Crank-Nicolson in `E` and `H`, with the polarization given
//! by the discrete convolution `P^n = Δε Σ_{k≤n} w_{n−k} E^k` through CM2
//! weights. Eliminating `H^n` and `P^n` leaves one SPD solve for `E^n` with
//!
//! ```text
//! A = ((ε∞ + Δε w₀)/τ) M_E + (τ/4) Cᵀ M_H⁻¹ C.
//! ```

mod convergence;
mod sources;

pub use convergence::{
    observed_rates, run_convergence, run_trajectory, step_count, ConvergenceMode, ErrorReport, ErrorRow, Trajectory,
};
pub use sources::{
    e_hat, h_hat, manufactured_sources, p_hat, Manufactured, ScalarFn, Separable, SourceSet, TimeFn, VectorFn,
};

use crate::cq_weights::{cm2_weights, CqWeights};
use crate::error::{check_param, Error, Result};
use crate::maxwell_fem::{load_cell, load_edge, AssembledOperators, MaxwellMesh};
use crate::sparse::{CsrMatrix, SpdSolver};

/// Material parameters. `delta_eps = 0` switches dispersion off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HnParams {
    pub eps_inf: f64,
    pub delta_eps: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl HnParams {
    pub fn new(eps_inf: f64, delta_eps: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_param(eps_inf >= 1.0 && eps_inf.is_finite(), "eps_inf", || format!("must be >= 1, got {eps_inf}"))?;
        check_param(delta_eps >= 0.0 && delta_eps.is_finite(), "delta_eps", || {
            format!("must be >= 0, got {delta_eps}")
        })?;
        check_param(alpha > 0.0 && alpha < 1.0, "alpha", || format!("must lie in (0, 1), got {alpha}"))?;
        check_param(beta > 0.0 && beta <= 1.0, "beta", || format!("must lie in (0, 1], got {beta}"))?;
        Ok(Self { eps_inf, delta_eps, alpha, beta })
    }
}

/// Discrete fields at one time level. `e` and `p` hold every mesh edge,
/// with the tangential boundary entries kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVectors {
    pub e: Vec<f64>,
    pub p: Vec<f64>,
    pub h: Vec<f64>,
}

/// Stepper state at level `n`.
#[derive(Debug, Clone)]
pub struct StepperState {
    pub n: usize,
    pub tau: f64,
    pub fields: FieldVectors,
    /// Free-dof `E^0 … E^n`.
    pub e_history: Vec<Vec<f64>>,
    /// `‖E^k‖²` in the edge mass norm.
    pub e_norm_sq_history: Vec<f64>,
    /// `Σ_{k≤n} w_{n−k} E^k` on free dofs, updated incrementally.
    pub convolution: Vec<f64>,
}

impl StepperState {
    pub fn time(&self) -> f64 {
        self.n as f64 * self.tau
    }
}

/// The three nonnegative parts of the discrete energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub term_e: f64,
    pub term_h: f64,
    pub term_hist: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.term_e + self.term_h + self.term_hist
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRow {
    pub n: usize,
    pub t: f64,
    pub parts: EnergyParts,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyTrace {
    pub rows: Vec<EnergyRow>,
}

impl EnergyTrace {
    pub fn totals(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parts.total()).collect()
    }

    /// `max_n (𝔼ⁿ − 𝔼ⁿ⁻¹) / 𝔼⁰`; nonpositive for a decaying trace.
    pub fn max_relative_increase(&self) -> f64 {
        let tot = self.totals();
        let Some(&e0) = tot.first() else { return 0.0 };
        let scale = if e0 > 0.0 { e0 } else { 1.0 };
        tot.windows(2).map(|w| (w[1] - w[0]) / scale).fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when `𝔼ⁿ − 𝔼ⁿ⁻¹ ≤ tol·𝔼⁰` at every step.
    pub fn is_decaying(&self, tol: f64) -> bool {
        self.rows.len() < 2 || self.max_relative_increase() <= tol
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,t,total,term_E,term_H,term_hist\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.10},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.n,
                r.t,
                r.parts.total(),
                r.parts.term_e,
                r.parts.term_h,
                r.parts.term_hist
            ));
        }
        out
    }
}

/// SPD solver for `((ε∞ + Δε w₀)/τ) M_E + (τ/4) Cᵀ M_H⁻¹ C`.
pub fn make_step_operator(ops: &AssembledOperators, params: &HnParams, tau: f64, w0: f64) -> Result<SpdSolver> {
    check_param(tau > 0.0 && tau.is_finite(), "tau", || format!("must be > 0, got {tau}"))?;
    check_param(w0 > 0.0, "w0", || format!("must be > 0, got {w0}"))?;
    SpdSolver::new(step_matrix(ops, params, tau, w0))
}

fn step_matrix(ops: &AssembledOperators, params: &HnParams, tau: f64, w0: f64) -> CsrMatrix {
    let inv_mh: Vec<f64> = ops.m_h.iter().map(|m| 1.0 / m).collect();
    let k = ops.c.gram_weighted(&inv_mh);
    let a = (params.eps_inf + params.delta_eps * w0) / tau;
    CsrMatrix::lin_comb(a, &ops.m_e, 0.25 * tau, &k)
}

struct TimedLoad {
    time: TimeFn,
    load: Vec<f64>,
}

impl TimedLoad {
    fn sum_at(terms: &[TimedLoad], t: f64, len: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; len];
        for term in terms {
            let s = (term.time)(t)?;
            out.iter_mut().zip(&term.load).for_each(|(o, l)| *o += s * l);
        }
        Ok(out)
    }
}

/// Time stepper bound to one mesh, parameter set, step size and source set.
pub struct HnStepper<'a> {
    mesh: &'a MaxwellMesh,
    ops: &'a AssembledOperators,
    params: HnParams,
    tau: f64,
    weights: CqWeights,
    solver: SpdSolver,
    inv_mh: Vec<f64>,
    f1: Vec<TimedLoad>,
    f2: Vec<TimedLoad>,
    /// `M_E⁻¹` applied to the constitutive loads.
    f3: Vec<TimedLoad>,
}

impl<'a> HnStepper<'a> {
    /// Stepper able to take up to `max_steps` steps.
    pub fn new(
        mesh: &'a MaxwellMesh,
        ops: &'a AssembledOperators,
        params: HnParams,
        tau: f64,
        max_steps: usize,
        sources: &SourceSet,
    ) -> Result<Self> {
        let weights = cm2_weights(params.alpha, params.beta, tau, max_steps)?;
        let solver = make_step_operator(ops, &params, tau, weights.weights[0])?;
        let f1 = sources
            .g1
            .iter()
            .map(|s| TimedLoad { time: s.time.clone(), load: load_edge(mesh, |x, y| (s.space)(x, y)) })
            .collect();
        let f2 = sources
            .g2
            .iter()
            .map(|s| TimedLoad { time: s.time.clone(), load: load_cell(mesh, |x, y| (s.space)(x, y)) })
            .collect();
        let f3 = if sources.g3.is_empty() {
            Vec::new()
        } else {
            let mass = SpdSolver::new(ops.m_e.clone())?;
            sources
                .g3
                .iter()
                .map(|s| {
                    let load = load_edge(mesh, |x, y| (s.space)(x, y));
                    Ok(TimedLoad { time: s.time.clone(), load: mass.solve(&load)? })
                })
                .collect::<Result<_>>()?
        };
        Ok(Self {
            mesh,
            ops,
            params,
            tau,
            weights,
            solver,
            inv_mh: ops.m_h.iter().map(|m| 1.0 / m).collect(),
            f1,
            f2,
            f3,
        })
    }

    pub fn weights(&self) -> &CqWeights {
        &self.weights
    }

    pub fn params(&self) -> &HnParams {
        &self.params
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn max_steps(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn step_operator(&self) -> &SpdSolver {
        &self.solver
    }

    /// Level-0 state from a full edge vector `e0` and cell vector `h0`.
    /// Boundary entries of `e0` are discarded. `P⁰` follows from the
    /// constitutive relation at `n = 0`.
    pub fn initial_state(&self, e0: &[f64], h0: Vec<f64>) -> Result<StepperState> {
        if e0.len() != self.mesh.n_edges() {
            return Err(Error::LengthMismatch { left: e0.len(), right: self.mesh.n_edges() });
        }
        if h0.len() != self.mesh.n_cells() {
            return Err(Error::LengthMismatch { left: h0.len(), right: self.mesh.n_cells() });
        }
        let e = self.mesh.restrict(e0);
        let w0 = self.weights.weights[0];
        let convolution: Vec<f64> = e.iter().map(|v| w0 * v).collect();
        let p = self.polarization(&convolution, 0.0)?;
        let norm = self.ops.m_e.quad_form(&e);
        Ok(StepperState {
            n: 0,
            tau: self.tau,
            fields: FieldVectors { e: self.mesh.extend(&e), p: self.mesh.extend(&p), h: h0 },
            e_history: vec![e],
            e_norm_sq_history: vec![norm],
            convolution,
        })
    }

    /// Zero fields at level 0.
    pub fn zero_state(&self) -> Result<StepperState> {
        self.initial_state(&vec![0.0; self.mesh.n_edges()], vec![0.0; self.mesh.n_cells()])
    }

    fn polarization(&self, convolution: &[f64], t: f64) -> Result<Vec<f64>> {
        let mut p: Vec<f64> = convolution.iter().map(|q| self.params.delta_eps * q).collect();
        if !self.f3.is_empty() {
            let extra = TimedLoad::sum_at(&self.f3, t, p.len())?;
            p.iter_mut().zip(&extra).for_each(|(a, b)| *a += b);
        }
        Ok(p)
    }

    /// `Σ_{k<m} w_{m−k} E^k` over the stored history.
    fn history_sum(&self, state: &StepperState, m: usize) -> Vec<f64> {
        let w = &self.weights.weights;
        let mut out = vec![0.0; self.mesh.n_free()];
        for (k, ek) in state.e_history.iter().enumerate().take(m) {
            let wk = w[m - k];
            out.iter_mut().zip(ek).for_each(|(o, e)| *o += wk * e);
        }
        out
    }

    /// `Σ_{k≤n} w_{n−k} E^k` recomputed from the stored history.
    pub fn convolution_from_history(&self, state: &StepperState) -> Vec<f64> {
        let n = state.n;
        let w0 = self.weights.weights[0];
        let mut q = self.history_sum(state, n);
        q.iter_mut().zip(&state.e_history[n]).for_each(|(a, e)| *a += w0 * e);
        q
    }

    /// Advances `state` from level `n` to `n + 1`.
    pub fn step(&self, state: &mut StepperState) -> Result<()> {
        let m = state.n + 1;
        if m > self.max_steps() {
            return Err(Error::OutOfRange(format!(
                "step {m} exceeds the {} steps the stepper was built for",
                self.max_steps()
            )));
        }
        let tau = self.tau;
        let (t0, t1) = ((m - 1) as f64 * tau, m as f64 * tau);
        let HnParams { eps_inf, delta_eps, .. } = self.params;
        let nf = self.mesh.n_free();
        let nc = self.mesh.n_cells();
        let e_prev = &state.e_history[m - 1];
        let h_prev = &state.fields.h;
        let hist = self.history_sum(state, m);

        // M_E [ε∞ E^{m−1} − Δε (hist − q^{m−1})] / τ
        let y: Vec<f64> = (0..nf)
            .map(|i| (eps_inf * e_prev[i] - delta_eps * (hist[i] - state.convolution[i])) / tau)
            .collect();
        let mut rhs = self.ops.m_e.mul_vec(&y);

        let f2 = if self.f2.is_empty() {
            vec![0.0; nc]
        } else {
            let a = TimedLoad::sum_at(&self.f2, t0, nc)?;
            let b = TimedLoad::sum_at(&self.f2, t1, nc)?;
            a.iter().zip(&b).map(|(u, v)| 0.5 * (u + v)).collect()
        };
        // Cᵀ [H^{m−1} − (τ/4) M_H⁻¹ C E^{m−1} + (τ/2) M_H⁻¹ F2]
        let ce_prev = self.ops.c.mul_vec(e_prev);
        let z: Vec<f64> = (0..nc)
            .map(|k| h_prev[k] + self.inv_mh[k] * (0.5 * tau * f2[k] - 0.25 * tau * ce_prev[k]))
            .collect();
        let ctz = self.ops.c.tr_mul_vec(&z);
        rhs.iter_mut().zip(&ctz).for_each(|(r, v)| *r += v);

        if !self.f1.is_empty() {
            let a = TimedLoad::sum_at(&self.f1, t0, nf)?;
            let b = TimedLoad::sum_at(&self.f1, t1, nf)?;
            rhs.iter_mut().zip(a.iter().zip(&b)).for_each(|(r, (u, v))| *r += 0.5 * (u + v));
        }
        if !self.f3.is_empty() {
            // M_E (M_E⁻¹F3(t_m) − M_E⁻¹F3(t_{m−1})) / τ
            let a = TimedLoad::sum_at(&self.f3, t0, nf)?;
            let b = TimedLoad::sum_at(&self.f3, t1, nf)?;
            let d: Vec<f64> = a.iter().zip(&b).map(|(u, v)| (v - u) / tau).collect();
            let md = self.ops.m_e.mul_vec(&d);
            rhs.iter_mut().zip(&md).for_each(|(r, v)| *r -= v);
        }

        let e_new = self.solver.solve(&rhs)?;

        let ce_new = self.ops.c.mul_vec(&e_new);
        let h_new: Vec<f64> = (0..nc)
            .map(|k| h_prev[k] + self.inv_mh[k] * (tau * f2[k] - 0.5 * tau * (ce_new[k] + ce_prev[k])))
            .collect();
        let w0 = self.weights.weights[0];
        let convolution: Vec<f64> = hist.iter().zip(&e_new).map(|(h, e)| h + w0 * e).collect();
        let p_new = self.polarization(&convolution, t1)?;

        state.e_norm_sq_history.push(self.ops.m_e.quad_form(&e_new));
        state.fields = FieldVectors { e: self.mesh.extend(&e_new), p: self.mesh.extend(&p_new), h: h_new };
        state.e_history.push(e_new);
        state.convolution = convolution;
        state.n = m;
        Ok(())
    }

    /// `ε∞‖Eⁿ‖²`, `‖Hⁿ‖²` and `Δε Σ_{k≤n} w_{n−k}‖E^k‖²` from stored norms.
    pub fn energy_parts(&self, state: &StepperState) -> EnergyParts {
        let n = state.n;
        let w = &self.weights.weights;
        let term_h = state.fields.h.iter().zip(&self.ops.m_h).map(|(h, m)| m * h * h).sum();
        let hist: f64 = state.e_norm_sq_history.iter().enumerate().map(|(k, s)| w[n - k] * s).sum();
        EnergyParts {
            term_e: self.params.eps_inf * state.e_norm_sq_history[n],
            term_h,
            term_hist: self.params.delta_eps * hist,
        }
    }

    pub fn energy(&self, state: &StepperState) -> f64 {
        self.energy_parts(state).total()
    }

    /// Runs `n_steps` steps from `state`, recording the energy at every level.
    pub fn run_with_energy(&self, state: &mut StepperState, n_steps: usize) -> Result<EnergyTrace> {
        let row = |s: &StepperState| EnergyRow { n: s.n, t: s.time(), parts: self.energy_parts(s) };
        let mut trace = EnergyTrace { rows: vec![row(state)] };
        for _ in 0..n_steps {
            self.step(state)?;
            trace.rows.push(row(state));
        }
        Ok(trace)
    }
}

/// Zero-source energy run from the smooth initial data
/// `E₀ = Ê`, `H₀ = Ĥ`.
pub fn energy_experiment(mesh: &MaxwellMesh, params: HnParams, tau: f64, n_steps: usize) -> Result<EnergyTrace> {
    use crate::maxwell_fem::{interpolate_e, interpolate_h};
    let ops = crate::maxwell_fem::assemble(mesh);
    let stepper = HnStepper::new(mesh, &ops, params, tau, n_steps, &SourceSet::zero())?;
    let e0 = interpolate_e(mesh, |x, y, _| e_hat(x, y), 0.0);
    let h0 = interpolate_h(mesh, |x, y, _| h_hat(x, y), 0.0);
    let mut state = stepper.initial_state(&e0, h0)?;
    stepper.run_with_energy(&mut state, n_steps)
}
