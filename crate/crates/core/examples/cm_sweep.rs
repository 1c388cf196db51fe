//! Complete-monotonicity indices of CM2 weights over an (alpha, beta) grid.
//!
//! `cargo run --release --example cm_sweep`

use hnmx::cm_check::{default_grid, sweep_grid, SumMode, SweepSpec};
use hnmx::cq_weights::Scheme;

fn main() -> hnmx::Result<()> {
    let grid = default_grid(0.1);
    let cells = sweep_grid(&SweepSpec {
        scheme: Scheme::Cm2,
        alphas: grid.clone(),
        betas: grid,
        tau: 0.01,
        j_max: 1000,
        k_max: 3,
        mode: SumMode::Compensated,
    })?;
    println!("{} cells, J = 1000, tau = 0.01", cells.len());
    for k in 0..=3 {
        let worst = cells
            .iter()
            .min_by(|a, b| a.report.indices[k].total_cmp(&b.report.indices[k]))
            .expect("nonempty grid");
        println!(
            "  k = {k}: min Index_k = {:.3e} at alpha = {:.1}, beta = {:.1}, j = {}",
            worst.report.indices[k], worst.alpha, worst.beta, worst.report.argmin[k]
        );
    }
    Ok(())
}
