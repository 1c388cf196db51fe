use crate::error::{check_param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Parallel to the x axis, carries the x component.
    Horizontal,
    /// Parallel to the y axis, carries the y component.
    Vertical,
}

/// Uniform `nx × ny` rectangular mesh of the unit square.
///
/// Horizontal edge `(i, j)` runs from node `(i, j)` to `(i+1, j)`; vertical
/// edge `(i, j)` from node `(i, j)` to `(i, j+1)`. Horizontal edges are
/// numbered first, each family x-fastest. Free (unconstrained) edges get a
/// second numbering interleaved row by row, which keeps the system matrices
/// banded with half-bandwidth about `2·nx`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellMesh {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    free_edges: Vec<usize>,
    edge_to_free: Vec<Option<usize>>,
}

impl MaxwellMesh {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        check_param(nx >= 1, "nx", || "need at least one cell".into())?;
        check_param(ny >= 1, "ny", || "need at least one cell".into())?;
        let mut mesh = Self {
            nx,
            ny,
            hx: 1.0 / nx as f64,
            hy: 1.0 / ny as f64,
            free_edges: Vec::new(),
            edge_to_free: Vec::new(),
        };
        let mut free = Vec::new();
        for j in 0..=ny {
            if j > 0 && j < ny {
                free.extend((0..nx).map(|i| mesh.h_edge(i, j)));
            }
            if j < ny {
                free.extend((1..nx).map(|i| mesh.v_edge(i, j)));
            }
        }
        let mut edge_to_free = vec![None; mesh.n_edges()];
        for (k, &e) in free.iter().enumerate() {
            edge_to_free[e] = Some(k);
        }
        mesh.free_edges = free;
        mesh.edge_to_free = edge_to_free;
        Ok(mesh)
    }

    pub fn n_h_edges(&self) -> usize {
        self.nx * (self.ny + 1)
    }

    pub fn n_v_edges(&self) -> usize {
        (self.nx + 1) * self.ny
    }

    pub fn n_edges(&self) -> usize {
        self.n_h_edges() + self.n_v_edges()
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn n_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn n_free(&self) -> usize {
        self.free_edges.len()
    }

    pub fn h_edge(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn v_edge(&self, i: usize, j: usize) -> usize {
        self.n_h_edges() + j * (self.nx + 1) + i
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    /// Kind and `(i, j)` label of an edge.
    pub fn edge_info(&self, e: usize) -> (EdgeKind, usize, usize) {
        if e < self.n_h_edges() {
            (EdgeKind::Horizontal, e % self.nx, e / self.nx)
        } else {
            let r = e - self.n_h_edges();
            (EdgeKind::Vertical, r % (self.nx + 1), r / (self.nx + 1))
        }
    }

    pub fn edge_midpoint(&self, e: usize) -> (f64, f64) {
        match self.edge_info(e) {
            (EdgeKind::Horizontal, i, j) => ((i as f64 + 0.5) * self.hx, j as f64 * self.hy),
            (EdgeKind::Vertical, i, j) => (i as f64 * self.hx, (j as f64 + 0.5) * self.hy),
        }
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        match self.edge_info(e).0 {
            EdgeKind::Horizontal => self.hx,
            EdgeKind::Vertical => self.hy,
        }
    }

    /// Tangential edges on `∂Ω`, whose dofs are pinned to zero.
    pub fn is_boundary(&self, e: usize) -> bool {
        match self.edge_info(e) {
            (EdgeKind::Horizontal, _, j) => j == 0 || j == self.ny,
            (EdgeKind::Vertical, i, _) => i == 0 || i == self.nx,
        }
    }

    pub fn cell_center(&self, c: usize) -> (f64, f64) {
        let (i, j) = (c % self.nx, c / self.nx);
        ((i as f64 + 0.5) * self.hx, (j as f64 + 0.5) * self.hy)
    }

    /// Lower-left corner of cell `c`.
    pub fn cell_origin(&self, c: usize) -> (f64, f64) {
        let (i, j) = (c % self.nx, c / self.nx);
        (i as f64 * self.hx, j as f64 * self.hy)
    }

    /// `[bottom, top, left, right]` edges of cell `c`.
    pub fn cell_edges(&self, c: usize) -> [usize; 4] {
        let (i, j) = (c % self.nx, c / self.nx);
        [self.h_edge(i, j), self.h_edge(i, j + 1), self.v_edge(i, j), self.v_edge(i + 1, j)]
    }

    pub fn free_edges(&self) -> &[usize] {
        &self.free_edges
    }

    pub fn free_index(&self, e: usize) -> Option<usize> {
        self.edge_to_free[e]
    }

    /// Free-dof part of a full edge vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        assert_eq!(full.len(), self.n_edges());
        self.free_edges.iter().map(|&e| full[e]).collect()
    }

    /// Full edge vector from free dofs, boundary entries zero.
    pub fn extend(&self, free: &[f64]) -> Vec<f64> {
        assert_eq!(free.len(), self.n_free());
        let mut full = vec![0.0; self.n_edges()];
        for (&e, &v) in self.free_edges.iter().zip(free) {
            full[e] = v;
        }
        full
    }
}
