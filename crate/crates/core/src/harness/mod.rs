//! Config-driven experiment runner behind the `hnmx` binary.
//!
//! Settings are flat `key = value` pairs, read from a file and then
//! overridden by command-line flags. Every CSV written starts with a `#`
//! line recording the resolved configuration, followed by a header row.

pub mod checks;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::cm_check::{default_grid, sweep_csv, sweep_grid, SumMode, SweepSpec, DEFAULT_NEG_TOL};
use crate::cq_weights::{CqWeights, Scheme};
use crate::error::{Error, Result};
use crate::hn_stepper::{energy_experiment, run_convergence, step_count, ConvergenceMode, HnParams};
use crate::maxwell_fem::MaxwellMesh;
use crate::special_fn::hn_kernel;
pub use checks::CheckOutcome;

/// Environment variable naming the output directory when none is configured.
pub const OUT_ENV: &str = "HNMX_OUT";

const DEFAULT_OUT: &str = "hnmx-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Weights,
    CmCheck,
    Kernel,
    Convergence,
    Energy,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Weights => "weights",
            Experiment::CmCheck => "cm-check",
            Experiment::Kernel => "kernel",
            Experiment::Convergence => "convergence",
            Experiment::Energy => "energy",
        })
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weights" => Ok(Experiment::Weights),
            "cm-check" | "cm_check" => Ok(Experiment::CmCheck),
            "kernel" => Ok(Experiment::Kernel),
            "convergence" => Ok(Experiment::Convergence),
            "energy" => Ok(Experiment::Energy),
            other => Err(Error::Config {
                field: "experiment".into(),
                reason: format!("unknown experiment `{other}`"),
            }),
        }
    }
}

/// Keys accepted in config files and as flags.
pub const KNOWN_KEYS: &[&str] = &[
    "alpha", "beta", "tau", "nx", "ny", "T", "J", "kmax", "scheme", "out", "check", "threads", "eps_inf",
    "delta_eps", "tau_ref", "mode", "tol", "t",
];

/// Raw `key = value` settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                field: format!("line {}", lineno + 1),
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            out.set(k.trim(), v.trim())?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config { field: key.into(), reason: "unknown key".into() });
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// `other` wins on conflicts.
    pub fn overridden_by(mut self, other: &Settings) -> Self {
        self.0.extend(other.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: field.into(), reason: reason.into() }
}

fn parse_number(field: &str, s: &str) -> Result<f64> {
    let s = s.trim();
    let v = if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| config_err(field, format!("bad number `{s}`")))?;
        let d: f64 = d.trim().parse().map_err(|_| config_err(field, format!("bad number `{s}`")))?;
        n / d
    } else {
        s.parse().map_err(|_| config_err(field, format!("bad number `{s}`")))?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(field, format!("`{s}` is not finite")))
    }
}

/// A comma-separated list of numbers or fractions, or an inclusive range
/// `start:step:end`.
pub fn parse_list(field: &str, s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (a, h, b) = (parse_number(field, parts[0])?, parse_number(field, parts[1])?, parse_number(field, parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(config_err(field, format!("range `{s}` needs step > 0 and end >= start")));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * h).collect());
    }
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| parse_number(field, p)).collect()
}

fn parse_usize(field: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| config_err(field, format!("expected a nonnegative integer, got `{s}`")))
}

fn parse_bool(field: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(config_err(field, format!("expected a boolean, got `{other}`"))),
    }
}

/// Fully resolved, validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub scheme: Scheme,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub tau: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub t_final: f64,
    pub j_max: usize,
    pub k_max: usize,
    pub out: PathBuf,
    pub check: bool,
    pub threads: Option<usize>,
    pub eps_inf: f64,
    pub delta_eps: f64,
    /// `None` compares against the exact solution.
    pub tau_ref: Option<f64>,
    pub tol: f64,
    /// Sample times of the kernel experiment.
    pub t_samples: Vec<f64>,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

impl ExperimentConfig {
    /// Applies `settings` over the experiment's defaults. `env_out` is the
    /// value of [`OUT_ENV`], used when `out` is not set.
    pub fn resolve(experiment: Experiment, settings: &Settings, env_out: Option<&str>) -> Result<Self> {
        use Experiment::*;
        let g = |k: &str| settings.get(k);
        let list = |k: &str, default: Vec<f64>| g(k).map_or(Ok(default), |s| parse_list(k, s));
        let (alpha_d, beta_d, tau_d) = match experiment {
            Weights => (vec![0.5], vec![0.5], vec![0.01]),
            CmCheck => (default_grid(0.05), default_grid(0.05), vec![0.01]),
            Kernel => (vec![0.5], vec![0.5], vec![]),
            Convergence => (vec![0.5], vec![0.5], vec![0.1, 0.05, 0.025]),
            Energy => (vec![0.1, 0.3, 0.5, 0.7, 0.9], vec![0.4], vec![0.01]),
        };
        let mesh_d = if experiment == Energy { 32 } else { 100 };
        let mode = g("mode").unwrap_or("reference");
        let tau = list("tau", tau_d)?;
        let tau_ref = match mode {
            "reference" => Some(match g("tau_ref") {
                Some(s) => parse_number("tau_ref", s)?,
                None => tau.iter().copied().fold(f64::INFINITY, f64::min) / 8.0,
            }),
            "exact" => None,
            other => return Err(config_err("mode", format!("expected `reference` or `exact`, got `{other}`"))),
        };
        let out = g("out").or(env_out).unwrap_or(DEFAULT_OUT);
        let cfg = Self {
            experiment,
            scheme: g("scheme").map_or(Ok(Scheme::Cm2), str::parse)?,
            alpha: list("alpha", alpha_d)?,
            beta: list("beta", beta_d)?,
            tau,
            nx: g("nx").map_or(Ok(mesh_d), |s| parse_usize("nx", s))?,
            ny: g("ny").map_or(Ok(mesh_d), |s| parse_usize("ny", s))?,
            t_final: g("T").map_or(Ok(1.0), |s| parse_number("T", s))?,
            j_max: g("J").map_or(Ok(1000), |s| parse_usize("J", s))?,
            k_max: g("kmax").map_or(Ok(3), |s| parse_usize("kmax", s))?,
            out: PathBuf::from(out),
            check: g("check").map_or(Ok(false), |s| parse_bool("check", s))?,
            threads: g("threads").map(|s| parse_usize("threads", s)).transpose()?,
            eps_inf: g("eps_inf").map_or(Ok(1.0), |s| parse_number("eps_inf", s))?,
            delta_eps: g("delta_eps").map_or(Ok(1.0), |s| parse_number("delta_eps", s))?,
            tau_ref,
            tol: g("tol").map_or(Ok(DEFAULT_NEG_TOL), |s| parse_number("tol", s))?,
            t_samples: list("t", log_grid(1e-3, 10.0, 41))?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        use Experiment::*;
        if self.alpha.is_empty() || self.beta.is_empty() {
            return Err(config_err("alpha", "alpha and beta need at least one value"));
        }
        for &a in &self.alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(config_err("alpha", format!("{a} outside (0, 1]")));
            }
        }
        for &b in &self.beta {
            if !(b > 0.0 && b <= 1.0) {
                return Err(config_err("beta", format!("{b} outside (0, 1]")));
            }
        }
        if self.threads == Some(0) {
            return Err(config_err("threads", "must be at least 1"));
        }
        match self.experiment {
            Weights | CmCheck => {
                if self.tau.len() != 1 || !(self.tau[0] > 0.0) {
                    return Err(config_err("tau", "needs exactly one positive step size"));
                }
                if self.experiment == CmCheck && self.k_max > self.j_max {
                    return Err(config_err("kmax", "must not exceed J"));
                }
            }
            Kernel => {
                if self.t_samples.is_empty() || self.t_samples.iter().any(|&t| !(t > 0.0)) {
                    return Err(config_err("t", "sample times must be positive"));
                }
            }
            Convergence | Energy => {
                if self.nx == 0 || self.ny == 0 {
                    return Err(config_err("nx", "mesh needs at least one cell per direction"));
                }
                if self.tau.is_empty() {
                    return Err(config_err("tau", "needs at least one step size"));
                }
                for &t in &self.tau {
                    step_count(self.t_final, t).map_err(|e| config_err("tau", e.to_string()))?;
                }
                if self.experiment == Convergence {
                    if self.tau.len() < 2 {
                        return Err(config_err("tau", "a convergence study needs at least two step sizes"));
                    }
                    for w in self.tau.windows(2) {
                        if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
                            return Err(config_err("tau", "step sizes must halve from one entry to the next"));
                        }
                    }
                }
                for &a in &self.alpha {
                    if a >= 1.0 {
                        return Err(config_err("alpha", "the time stepper needs alpha < 1"));
                    }
                }
                HnParams::new(self.eps_inf, self.delta_eps, self.alpha[0], self.beta[0])
                    .map_err(|e| config_err("eps_inf", e.to_string()))?;
            }
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(f64, f64)> {
        self.alpha.iter().flat_map(|&a| self.beta.iter().map(move |&b| (a, b))).collect()
    }

    /// One-line `#` comment recording every resolved field.
    pub fn comment_line(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut s = format!(
            "# hnmx {} scheme={} alpha={} beta={} tau={} nx={} ny={} T={} J={} kmax={} eps_inf={} delta_eps={} tol={:e}",
            self.experiment,
            self.scheme,
            list(&self.alpha),
            list(&self.beta),
            list(&self.tau),
            self.nx,
            self.ny,
            self.t_final,
            self.j_max,
            self.k_max,
            self.eps_inf,
            self.delta_eps,
            self.tol,
        );
        match self.tau_ref {
            Some(t) => s.push_str(&format!(" mode=reference tau_ref={t}")),
            None => s.push_str(" mode=exact"),
        }
        if self.experiment == Experiment::Kernel {
            s.push_str(&format!(" t={}", list(&self.t_samples)));
        }
        s.push('\n');
        s
    }
}

/// Files written and checks evaluated by one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub checks: Vec<CheckOutcome>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn tag(x: f64) -> String {
    format!("{x:.4}").trim_end_matches('0').trim_end_matches('.').to_string()
}

struct Writer<'a> {
    cfg: &'a ExperimentConfig,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        fs::create_dir_all(&self.cfg.out)?;
        let path = self.cfg.out.join(name);
        fs::write(&path, format!("{}{body}", self.cfg.comment_line()))?;
        self.files.push(path);
        Ok(())
    }
}

/// Runs one experiment, writing its CSVs under `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunSummary> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| config_err("threads", e.to_string()))?;
    pool.install(|| run_inner(config))
}

fn run_inner(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut w = Writer { cfg, files: Vec::new() };
    let mut checks = Vec::new();
    match cfg.experiment {
        Experiment::Weights => {
            let tau = cfg.tau[0];
            let tables = cfg
                .pairs()
                .par_iter()
                .map(|&(a, b)| CqWeights::generate(cfg.scheme, a, b, tau, cfg.j_max))
                .collect::<Result<Vec<_>>>()?;
            let mut body = String::from("alpha,beta,tau,j,w_j\n");
            for t in &tables {
                for (j, v) in t.weights.iter().enumerate() {
                    body.push_str(&format!("{},{},{},{j},{v:.17e}\n", t.alpha, t.beta, t.tau));
                }
            }
            w.write(&format!("weights_{}.csv", cfg.scheme), &body)?;
            if cfg.check {
                let pairs = [(0.1, 0.1), (0.5, 0.5), (0.9, 0.9)];
                checks.push(checks::quadrature_order(&pairs, &[0.1, 0.05, 0.025])?);
                checks.push(checks::consistency_residual(&default_grid(0.1), 0.1)?);
            }
        }
        Experiment::CmCheck => {
            let spec = SweepSpec {
                scheme: cfg.scheme,
                alphas: cfg.alpha.clone(),
                betas: cfg.beta.clone(),
                tau: cfg.tau[0],
                j_max: cfg.j_max,
                k_max: cfg.k_max,
                mode: SumMode::Plain,
            };
            let cells = sweep_grid(&spec)?;
            w.write(&format!("cm_check_{}.csv", cfg.scheme), &sweep_csv(&cells, cfg.tol))?;
            let mut summary = String::from("k,min_index,cells_below_tol,cells_below_1e-8\n");
            let below_tol = crate::cm_check::failing_counts(&cells, -cfg.tol);
            let below_big = crate::cm_check::failing_counts(&cells, -1e-8);
            for k in 0..=cfg.k_max {
                let m = cells.iter().map(|c| c.report.indices[k]).fold(f64::INFINITY, f64::min);
                summary.push_str(&format!("{k},{m:.17e},{},{}\n", below_tol[k], below_big[k]));
            }
            w.write(&format!("cm_check_{}_summary.csv", cfg.scheme), &summary)?;
            if cfg.check {
                checks.push(match cfg.scheme {
                    Scheme::Bdf2 => checks::monotonicity_breaks(&cells, -1e-8),
                    _ => checks::completely_monotone(&cells, cfg.tol),
                });
            }
        }
        Experiment::Kernel => {
            let mut body = String::from("alpha,beta,t,omega\n");
            for (a, b) in cfg.pairs() {
                for &t in &cfg.t_samples {
                    body.push_str(&format!("{a},{b},{t:.10e},{:.17e}\n", hn_kernel(a, b, t)?));
                }
            }
            w.write("kernel.csv", &body)?;
            if cfg.check {
                checks.push(checks::special_function_identities()?);
            }
        }
        Experiment::Convergence => {
            let mesh = MaxwellMesh::new(cfg.nx, cfg.ny)?;
            let mode = cfg.tau_ref.map_or(ConvergenceMode::VsExact, |t| ConvergenceMode::VsReference { tau_ref: t });
            let mut reports = Vec::new();
            for (a, b) in cfg.pairs() {
                let params = HnParams::new(cfg.eps_inf, cfg.delta_eps, a, b)?;
                let rep = run_convergence(&mesh, params, &cfg.tau, cfg.t_final, mode)?;
                w.write(&format!("convergence_a{}_b{}.csv", tag(a), tag(b)), &rep.to_csv()?)?;
                reports.push((format!("({a},{b})"), rep));
            }
            if cfg.check {
                checks.push(checks::rates_within(&reports, 1.8, 2.2)?);
            }
        }
        Experiment::Energy => {
            let mesh = MaxwellMesh::new(cfg.nx, cfg.ny)?;
            let runs: Vec<(f64, f64, f64)> =
                cfg.pairs().into_iter().flat_map(|(a, b)| cfg.tau.iter().map(move |&t| (a, b, t))).collect();
            let traces = runs
                .par_iter()
                .map(|&(a, b, tau)| {
                    let params = HnParams::new(cfg.eps_inf, cfg.delta_eps, a, b)?;
                    energy_experiment(&mesh, params, tau, step_count(cfg.t_final, tau)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut named = Vec::new();
            for (&(a, b, tau), trace) in runs.iter().zip(traces) {
                let name = if cfg.tau.len() == 1 {
                    format!("energy_a{}_b{}.csv", tag(a), tag(b))
                } else {
                    format!("energy_a{}_b{}_tau{}.csv", tag(a), tag(b), tag(tau))
                };
                w.write(&name, &trace.to_csv())?;
                named.push((format!("({a},{b}) tau={tau}"), trace));
            }
            if cfg.check {
                checks.push(checks::energy_decay(&named, 1e-10));
                checks.push(checks::large_step_decay(&cfg.pairs(), 1e-10)?);
                checks.push(checks::structural()?);
            }
        }
    }
    Ok(RunSummary { files: w.files, checks })
}
