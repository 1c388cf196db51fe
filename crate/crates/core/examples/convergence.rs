//! Temporal convergence of the full scheme on the manufactured solution.
//!
//! `cargo run --release --example convergence`

use hnmx::hn_stepper::{run_convergence, ConvergenceMode, HnParams};
use hnmx::maxwell_fem::MaxwellMesh;

fn main() -> hnmx::Result<()> {
    let mesh = MaxwellMesh::new(32, 32)?;
    let taus = [0.1, 0.05, 0.025];
    for (a, b) in [(0.5, 0.5), (0.5, 1.0)] {
        let params = HnParams::new(1.0, 1.0, a, b)?;
        let rep = run_convergence(&mesh, params, &taus, 1.0, ConvergenceMode::VsReference { tau_ref: 1.0 / 320.0 })?;
        println!("alpha = {a}, beta = {b}, against tau_ref = 1/320");
        print!("{}", rep.to_csv()?);

        // against the exact fields the spatial error dominates once tau is small
        let rep = run_convergence(&mesh, params, &taus, 1.0, ConvergenceMode::VsExact)?;
        println!("against the exact solution");
        println!("{}", rep.to_csv()?);
    }
    Ok(())
}
