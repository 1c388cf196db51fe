use super::mesh::MaxwellMesh;
use super::{gauss_points, local_basis};
use crate::sparse::CsrMatrix;

/// Mass and curl matrices of the edge/cell pair on the free dofs.
#[derive(Debug, Clone)]
pub struct AssembledOperators {
    /// Edge mass matrix on free dofs.
    pub m_e: CsrMatrix,
    /// Diagonal of the cell mass matrix.
    pub m_h: Vec<f64>,
    /// Curl matrix, cells × free edges.
    pub c: CsrMatrix,
    /// Curl matrix on all edges, before constraint elimination.
    pub c_full: CsrMatrix,
}

/// `∫_K φ_a·φ_b` for the local `[bottom, top, left, right]` basis.
pub fn local_mass(hx: f64, hy: f64) -> [[f64; 4]; 4] {
    let a = hx * hy;
    let (d, o) = (a / 3.0, a / 6.0);
    [[d, o, 0.0, 0.0], [o, d, 0.0, 0.0], [0.0, 0.0, d, o], [0.0, 0.0, o, d]]
}

/// `∫_K ∇×φ_a` for the local `[bottom, top, left, right]` basis.
pub fn local_curl(hx: f64, hy: f64) -> [f64; 4] {
    [hx, -hx, -hy, hy]
}

pub fn assemble(mesh: &MaxwellMesh) -> AssembledOperators {
    let ml = local_mass(mesh.hx, mesh.hy);
    let cl = local_curl(mesh.hx, mesh.hy);
    let mut mass = Vec::with_capacity(16 * mesh.n_cells());
    let mut curl = Vec::with_capacity(4 * mesh.n_cells());
    let mut curl_full = Vec::with_capacity(4 * mesh.n_cells());
    for c in 0..mesh.n_cells() {
        let edges = mesh.cell_edges(c);
        let free = edges.map(|e| mesh.free_index(e));
        for a in 0..4 {
            curl_full.push((c, edges[a], cl[a]));
            let Some(fa) = free[a] else { continue };
            curl.push((c, fa, cl[a]));
            for b in 0..4 {
                if let Some(fb) = free[b] {
                    if ml[a][b] != 0.0 {
                        mass.push((fa, fb, ml[a][b]));
                    }
                }
            }
        }
    }
    let nf = mesh.n_free();
    AssembledOperators {
        m_e: CsrMatrix::from_triplets(nf, nf, &mass),
        m_h: vec![mesh.cell_area(); mesh.n_cells()],
        c: CsrMatrix::from_triplets(mesh.n_cells(), nf, &curl),
        c_full: CsrMatrix::from_triplets(mesh.n_cells(), mesh.n_edges(), &curl_full),
    }
}

/// Node-to-edge difference operator: `(φ(end) − φ(start)) / length`.
pub fn discrete_gradient(mesh: &MaxwellMesh) -> CsrMatrix {
    use super::mesh::EdgeKind;
    let mut t = Vec::with_capacity(2 * mesh.n_edges());
    for e in 0..mesh.n_edges() {
        let (kind, i, j) = mesh.edge_info(e);
        let (start, end, len) = match kind {
            EdgeKind::Horizontal => (mesh.node(i, j), mesh.node(i + 1, j), mesh.hx),
            EdgeKind::Vertical => (mesh.node(i, j), mesh.node(i, j + 1), mesh.hy),
        };
        t.push((e, start, -1.0 / len));
        t.push((e, end, 1.0 / len));
    }
    CsrMatrix::from_triplets(mesh.n_edges(), mesh.n_nodes(), &t)
}

/// `(f, φ_j)` for every free edge basis function.
pub fn load_edge(mesh: &MaxwellMesh, f: impl Fn(f64, f64) -> [f64; 2]) -> Vec<f64> {
    let mut out = vec![0.0; mesh.n_free()];
    let area = mesh.cell_area();
    let gp = gauss_points();
    for c in 0..mesh.n_cells() {
        let (x0, y0) = mesh.cell_origin(c);
        let free = mesh.cell_edges(c).map(|e| mesh.free_index(e));
        if free.iter().all(Option::is_none) {
            continue;
        }
        for &(xi, wx) in &gp {
            for &(eta, wy) in &gp {
                let v = f(x0 + xi * mesh.hx, y0 + eta * mesh.hy);
                let basis = local_basis(xi, eta);
                for a in 0..4 {
                    if let Some(fa) = free[a] {
                        let phi = basis[a];
                        out[fa] += wx * wy * area * (v[0] * phi[0] + v[1] * phi[1]);
                    }
                }
            }
        }
    }
    out
}

/// `(g, ψ_K)` for every cell indicator.
pub fn load_cell(mesh: &MaxwellMesh, g: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let area = mesh.cell_area();
    let gp = gauss_points();
    (0..mesh.n_cells())
        .map(|c| {
            let (x0, y0) = mesh.cell_origin(c);
            let mut s = 0.0;
            for &(xi, wx) in &gp {
                for &(eta, wy) in &gp {
                    s += wx * wy * g(x0 + xi * mesh.hx, y0 + eta * mesh.hy);
                }
            }
            s * area
        })
        .collect()
}
