use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hnmx::harness::{run, Experiment, ExperimentConfig, Settings, OUT_ENV};

/// Havriliak-Negami Maxwell experiments: weights, cm-check, kernel,
/// convergence, energy.
#[derive(Debug, Parser)]
#[command(name = "hnmx", version)]
struct Cli {
    /// weights | cm-check | kernel | convergence | energy
    experiment: String,
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fractional order(s): list `0.1,0.5` or range `start:step:end`.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Step size(s), fractions allowed: `1/10,1/20`.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<String>,
    /// Number of weights / largest index checked.
    #[arg(long = "J")]
    j_max: Option<String>,
    #[arg(long)]
    kmax: Option<String>,
    /// cm2 | bdf1 | bdf2
    #[arg(long)]
    scheme: Option<String>,
    /// Output directory (falls back to $HNMX_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate pass/fail checks and exit nonzero on failure.
    #[arg(long)]
    check: bool,
    /// Worker threads (default: all hardware threads).
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    eps_inf: Option<String>,
    #[arg(long)]
    delta_eps: Option<String>,
    /// Reference step of the convergence study.
    #[arg(long)]
    tau_ref: Option<String>,
    /// reference | exact
    #[arg(long)]
    mode: Option<String>,
    /// Tolerance for negative indices.
    #[arg(long)]
    tol: Option<String>,
    /// Kernel sample times.
    #[arg(long)]
    t: Option<String>,
}

impl Cli {
    fn flag_settings(&self) -> hnmx::Result<Settings> {
        let mut s = Settings::new();
        let pairs = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("tau", &self.tau),
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("T", &self.t_final),
            ("J", &self.j_max),
            ("kmax", &self.kmax),
            ("scheme", &self.scheme),
            ("threads", &self.threads),
            ("eps_inf", &self.eps_inf),
            ("delta_eps", &self.delta_eps),
            ("tau_ref", &self.tau_ref),
            ("mode", &self.mode),
            ("tol", &self.tol),
            ("t", &self.t),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.clone())?;
            }
        }
        if let Some(out) = &self.out {
            s.set("out", out.to_string_lossy().into_owned())?;
        }
        if self.check {
            s.set("check", "true")?;
        }
        Ok(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        let experiment: Experiment = cli.experiment.parse()?;
        let file = match &cli.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::new(),
        };
        let settings = file.overridden_by(&cli.flag_settings()?);
        let env_out = std::env::var(OUT_ENV).ok();
        let cfg = ExperimentConfig::resolve(experiment, &settings, env_out.as_deref())?;
        run(&cfg)
    })();
    match result {
        Ok(summary) => {
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            for c in &summary.checks {
                println!("{c}");
            }
            if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("hnmx: {e}");
            ExitCode::from(2)
        }
    }
}
