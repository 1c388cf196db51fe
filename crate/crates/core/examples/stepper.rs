//! Driving the time stepper by hand: custom initial data, step-by-step
//! energy and the polarization field.
//!
//! `cargo run --release --example stepper`

use hnmx::hn_stepper::{HnParams, HnStepper, SourceSet};
use hnmx::maxwell_fem::{assemble, interpolate_e, interpolate_h, MaxwellMesh};

fn main() -> hnmx::Result<()> {
    let mesh = MaxwellMesh::new(24, 24)?;
    let ops = assemble(&mesh);
    let params = HnParams::new(2.0, 3.0, 0.7, 0.6)?;
    let stepper = HnStepper::new(&mesh, &ops, params, 0.02, 50, &SourceSet::zero())?;

    let pi = std::f64::consts::PI;
    let e0 = interpolate_e(&mesh, |x, y, _| [(pi * y).sin() * x, (pi * x).sin() * y], 0.0);
    let h0 = interpolate_h(&mesh, |x, y, _| (x - 0.5) * (y - 0.5), 0.0);
    let mut state = stepper.initial_state(&e0, h0)?;
    for _ in 0..5 {
        let parts = stepper.energy_parts(&state);
        let p_max = state.fields.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "n = {:>2} t = {:.2}  energy {:.6} (E {:.6}, H {:.6}, memory {:.6})  max |P| {p_max:.4}",
            state.n,
            state.time(),
            parts.total(),
            parts.term_e,
            parts.term_h,
            parts.term_hist
        );
        for _ in 0..10 {
            stepper.step(&mut state)?;
        }
    }
    Ok(())
}
