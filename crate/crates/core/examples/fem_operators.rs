//! Lowest-order edge elements on the unit square: operator sizes, the
//! discrete de Rham property and interpolation accuracy.
//!
//! `cargo run --example fem_operators`

use hnmx::hn_stepper::{e_hat, h_hat};
use hnmx::maxwell_fem::{assemble, discrete_gradient, interpolate_e, interpolate_h, l2_error, ExactField, MaxwellMesh};

fn main() -> hnmx::Result<()> {
    let mesh = MaxwellMesh::new(5, 4)?;
    let ops = assemble(&mesh);
    let cg = ops.c_full.matmul(&discrete_gradient(&mesh));
    println!(
        "5x4 mesh: {} edges ({} free), {} cells, mass nnz {}, max |C G| = {:e}",
        mesh.n_edges(),
        mesh.n_free(),
        mesh.n_cells(),
        ops.m_e.nnz(),
        cg.triplets().iter().map(|t| t.2.abs()).fold(0.0, f64::max)
    );

    println!("\ninterpolation error of the manufactured profiles");
    let e = |x: f64, y: f64, _t: f64| e_hat(x, y);
    let h = |x: f64, y: f64, _t: f64| h_hat(x, y);
    let mut prev: Option<(f64, f64)> = None;
    for n in [8, 16, 32, 64] {
        let mesh = MaxwellMesh::new(n, n)?;
        let ee = l2_error(&mesh, &interpolate_e(&mesh, e, 0.0), ExactField::Edge(&e), 0.0);
        let eh = l2_error(&mesh, &interpolate_h(&mesh, h, 0.0), ExactField::Cell(&h), 0.0);
        let rates = prev.map_or(String::new(), |(pe, ph)| format!("rates {:.2} {:.2}", (pe / ee).log2(), (ph / eh).log2()));
        println!("  {n:>3}x{n:<3} E {ee:.4e}  H {eh:.4e}  {rates}");
        prev = Some((ee, eh));
    }
    Ok(())
}
