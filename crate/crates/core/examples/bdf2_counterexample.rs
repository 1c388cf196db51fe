//! BDF2 convolution weights lose complete monotonicity; CM2 weights keep it.
//!
//! `cargo run --release --example bdf2_counterexample`

use hnmx::cm_check::{default_grid, failing_counts, sweep_grid, IndexReport, SumMode, SweepSpec};
use hnmx::cq_weights::{CqWeights, Scheme};

fn main() -> hnmx::Result<()> {
    let (alpha, beta, tau) = (0.9, 0.9, 0.01);
    for scheme in [Scheme::Cm2, Scheme::Bdf2] {
        let w = CqWeights::generate(scheme, alpha, beta, tau, 1000)?;
        let rep = IndexReport::compute(&w.weights, 3, 1000, SumMode::Compensated)?;
        let shown: Vec<String> = rep.indices.iter().map(|v| format!("{v:.3e}")).collect();
        println!("{scheme:>4} at ({alpha},{beta}): Index_0..3 = [{}]", shown.join(", "));
    }

    let grid = default_grid(0.05);
    let cells = sweep_grid(&SweepSpec {
        scheme: Scheme::Bdf2,
        alphas: grid.clone(),
        betas: grid,
        tau,
        j_max: 1000,
        k_max: 3,
        mode: SumMode::Compensated,
    })?;
    println!("\nbdf2 cells with Index_k < -1e-8, k = 0..3: {:?}", failing_counts(&cells, -1e-8));
    Ok(())
}
