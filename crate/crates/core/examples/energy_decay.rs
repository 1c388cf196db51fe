//! Energy of zero-source runs for several Havriliak-Negami parameters.
//!
//! `cargo run --release --example energy_decay`

use hnmx::hn_stepper::{energy_experiment, HnParams};
use hnmx::maxwell_fem::MaxwellMesh;

fn main() -> hnmx::Result<()> {
    let mesh = MaxwellMesh::new(32, 32)?;
    println!("{:>5} {:>5} {:>12} {:>12} {:>14}", "alpha", "beta", "E(0)", "E(1)", "max step incr");
    for (a, b) in [(0.1, 0.4), (0.5, 0.4), (0.9, 0.4), (0.5, 1.0), (0.9, 0.1)] {
        let trace = energy_experiment(&mesh, HnParams::new(1.0, 1.0, a, b)?, 0.01, 100)?;
        let tot = trace.totals();
        println!("{a:>5} {b:>5} {:>12.6} {:>12.6} {:>14.3e}", tot[0], tot[100], trace.max_relative_increase());
    }

    // without dispersion the scheme conserves energy
    let trace = energy_experiment(&mesh, HnParams::new(1.0, 0.0, 0.5, 0.5)?, 0.01, 100)?;
    let tot = trace.totals();
    println!("\ndelta_eps = 0: E(0) = {:.15}, E(1) = {:.15}", tot[0], tot[100]);

    // large steps still dissipate
    let trace = energy_experiment(&mesh, HnParams::new(1.0, 1.0, 0.5, 0.5)?, 0.5, 2)?;
    println!("tau = 0.5: energies {:?}", trace.totals());
    Ok(())
}
