//! Running a harness experiment from a config string, as the `hnmx` binary
//! does, into a temporary directory.
//!
//! `cargo run --example harness_config`

use hnmx::harness::{run, Experiment, ExperimentConfig, Settings};

fn main() -> hnmx::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| hnmx::Error::Io(e.to_string()))?;
    let file = Settings::parse("# kernel samples\nalpha = 0.3,0.6\nbeta = 0.5\nt = 0.01,0.1,1,10\n")?;
    let mut flags = Settings::new();
    flags.set("check", "true")?;
    flags.set("out", dir.path().to_string_lossy())?;
    let cfg = ExperimentConfig::resolve(Experiment::Kernel, &file.overridden_by(&flags), None)?;

    let summary = run(&cfg)?;
    for f in &summary.files {
        println!("{}:", f.display());
        print!("{}", std::fs::read_to_string(f).map_err(|e| hnmx::Error::Io(e.to_string()))?);
    }
    for c in &summary.checks {
        println!("{c}");
    }
    Ok(())
}
