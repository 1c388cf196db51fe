//! Lowest-order rectangular edge elements for `E`, `P` and cellwise
//! constants for `H` on the unit square.
//!
//! On a cell with local coordinates `ξ, η ∈ [0, 1]` the four edge basis
//! functions are `(1−η, 0)`, `(η, 0)`, `(0, 1−ξ)`, `(0, ξ)` for the bottom,
//! top, left and right edge. The edge dof is the tangential field value at
//! the edge midpoint. In 2D the curl of a vector field is the scalar
//! `∂x E₂ − ∂y E₁` and the curl of a scalar is `(∂y H, −∂x H)`.

mod assembly;
mod mesh;

pub use assembly::{assemble, discrete_gradient, load_cell, load_edge, local_curl, local_mass, AssembledOperators};
pub use mesh::{EdgeKind, MaxwellMesh};

/// Three-point Gauss-Legendre rule on `[0, 1]` as `(node, weight)`.
pub fn gauss_points() -> [(f64, f64); 3] {
    let d = 0.5 * (0.6f64).sqrt();
    [(0.5 - d, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + d, 5.0 / 18.0)]
}

/// Local `[bottom, top, left, right]` basis at reference point `(ξ, η)`.
pub(crate) fn local_basis(xi: f64, eta: f64) -> [[f64; 2]; 4] {
    [[1.0 - eta, 0.0], [eta, 0.0], [0.0, 1.0 - xi], [0.0, xi]]
}

/// Full edge-dof vector of a vector field: tangential value at each edge
/// midpoint. Boundary edges are sampled too.
pub fn interpolate_e(mesh: &MaxwellMesh, f: impl Fn(f64, f64, f64) -> [f64; 2], t: f64) -> Vec<f64> {
    (0..mesh.n_edges())
        .map(|e| {
            let (x, y) = mesh.edge_midpoint(e);
            let v = f(x, y, t);
            match mesh.edge_info(e).0 {
                EdgeKind::Horizontal => v[0],
                EdgeKind::Vertical => v[1],
            }
        })
        .collect()
}

/// Cell-dof vector of a scalar field: value at each cell center.
pub fn interpolate_h(mesh: &MaxwellMesh, f: impl Fn(f64, f64, f64) -> f64, t: f64) -> Vec<f64> {
    (0..mesh.n_cells())
        .map(|c| {
            let (x, y) = mesh.cell_center(c);
            f(x, y, t)
        })
        .collect()
}

/// Discrete edge field at reference point `(ξ, η)` of cell `c`.
pub fn eval_edge_field(mesh: &MaxwellMesh, e_full: &[f64], c: usize, xi: f64, eta: f64) -> [f64; 2] {
    let edges = mesh.cell_edges(c);
    let b = local_basis(xi, eta);
    let mut v = [0.0; 2];
    for a in 0..4 {
        v[0] += e_full[edges[a]] * b[a][0];
        v[1] += e_full[edges[a]] * b[a][1];
    }
    v
}

/// Exact field to compare discrete dofs against.
pub enum ExactField<'a> {
    /// Compared with a full edge-dof vector.
    Edge(&'a dyn Fn(f64, f64, f64) -> [f64; 2]),
    /// Compared with a cell-dof vector.
    Cell(&'a dyn Fn(f64, f64, f64) -> f64),
}

/// `‖exact(·, t) − discrete‖_{L²(Ω)}` by a 3×3 Gauss rule on every cell.
pub fn l2_error(mesh: &MaxwellMesh, dofs: &[f64], exact: ExactField<'_>, t: f64) -> f64 {
    let gp = gauss_points();
    let area = mesh.cell_area();
    let mut total = 0.0;
    for c in 0..mesh.n_cells() {
        let (x0, y0) = mesh.cell_origin(c);
        for &(xi, wx) in &gp {
            for &(eta, wy) in &gp {
                let (x, y) = (x0 + xi * mesh.hx, y0 + eta * mesh.hy);
                let sq = match &exact {
                    ExactField::Edge(f) => {
                        let u = f(x, y, t);
                        let v = eval_edge_field(mesh, dofs, c, xi, eta);
                        (u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)
                    }
                    ExactField::Cell(f) => (f(x, y, t) - dofs[c]).powi(2),
                };
                total += wx * wy * area * sq;
            }
        }
    }
    total.sqrt()
}
