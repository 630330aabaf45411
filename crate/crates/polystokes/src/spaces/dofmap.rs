use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::mesh::Mesh;
use crate::polyspace::monomial::dim_p;
use crate::polyspace::SpaceTag;
use crate::Real;

/// The four discrete spaces of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Scalar potentials (vertex values, rot dofs, edge and cell moments).
    XRot,
    /// Vector velocities.
    XGrad,
    /// Matrix-valued Jacobians.
    XL2Mat,
    /// Piecewise polynomial pressures.
    XL2,
}

impl SpaceKind {
    /// (vertex, edge, cell) block sizes at degree k.
    pub fn block_sizes(self, k: usize) -> [usize; 3] {
        let k = k as i32;
        match self {
            SpaceKind::XRot => [3, (2 * k + 1) as usize, dim_p(k - 1)],
            SpaceKind::XGrad => [2, 2 * (k as usize + 1), SpaceTag::G(k - 1).dim() + SpaceTag::Gc(k).dim()],
            SpaceKind::XL2Mat => [0, 2 * (k as usize + 2), SpaceTag::RTb(k + 1).dim()],
            SpaceKind::XL2 => [0, 0, dim_p(k)],
        }
    }
}

/// Global numbering: vertex blocks, then edge blocks, then cell blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DofMap {
    pub kind: SpaceKind,
    pub k: usize,
    pub sizes: [usize; 3],
    pub counts: [usize; 3],
    /// Dofs attached to boundary vertices and edges, sorted.
    pub boundary: Vec<usize>,
}

impl DofMap {
    pub fn new<T: Real>(mesh: &Mesh<T>, k: usize, kind: SpaceKind) -> Self {
        let sizes = kind.block_sizes(k);
        let counts = [mesh.n_vertices(), mesh.n_edges(), mesh.n_cells()];
        let mut map = Self { kind, k, sizes, counts, boundary: Vec::new() };
        let mut boundary = Vec::new();
        for v in 0..mesh.n_vertices() {
            if mesh.is_boundary_vertex(v) {
                boundary.extend(map.vertex(v));
            }
        }
        for e in mesh.boundary_edges() {
            boundary.extend(map.edge(e));
        }
        map.boundary = boundary;
        map
    }

    pub fn dim(&self) -> usize {
        (0..3).map(|i| self.sizes[i] * self.counts[i]).sum()
    }

    pub fn vertex(&self, v: usize) -> Range<usize> {
        let s = v * self.sizes[0];
        s..s + self.sizes[0]
    }

    pub fn edge(&self, e: usize) -> Range<usize> {
        let s = self.counts[0] * self.sizes[0] + e * self.sizes[1];
        s..s + self.sizes[1]
    }

    pub fn cell(&self, c: usize) -> Range<usize> {
        let s = self.counts[0] * self.sizes[0] + self.counts[1] * self.sizes[1] + c * self.sizes[2];
        s..s + self.sizes[2]
    }

    /// Global indices of the local dofs of a cell: its vertices and edges in
    /// loop order, then the cell block.
    pub fn local_dofs<T: Real>(&self, mesh: &Mesh<T>, c: usize) -> Vec<usize> {
        let cell = mesh.cell(c);
        let mut d = Vec::with_capacity(cell.vertices.len() * (self.sizes[0] + self.sizes[1]) + self.sizes[2]);
        for &v in &cell.vertices {
            d.extend(self.vertex(v));
        }
        for &e in &cell.edges {
            d.extend(self.edge(e));
        }
        d.extend(self.cell(c));
        d
    }

    /// Global indices of the dofs of an edge: lower-id vertex, higher-id
    /// vertex, then the edge block.
    pub fn edge_local_dofs<T: Real>(&self, mesh: &Mesh<T>, e: usize) -> Vec<usize> {
        let [a, b] = mesh.edge(e).vertices;
        let mut d: Vec<usize> = self.vertex(a).collect();
        d.extend(self.vertex(b));
        d.extend(self.edge(e));
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cartesian;

    #[test]
    fn dimension_examples() {
        let m2 = generate_cartesian::<f64>(2).unwrap();
        assert_eq!(DofMap::new(&m2, 1, SpaceKind::XL2).dim(), 12);
        let m1 = generate_cartesian::<f64>(1).unwrap();
        assert_eq!(DofMap::new(&m1, 0, SpaceKind::XGrad).dim(), 16);
        assert_eq!(DofMap::new(&m1, 1, SpaceKind::XRot).dim(), 25);
    }

    #[test]
    fn numbering_is_contiguous_and_total() {
        let m = generate_cartesian::<f64>(3).unwrap();
        for kind in [SpaceKind::XRot, SpaceKind::XGrad, SpaceKind::XL2Mat, SpaceKind::XL2] {
            for k in 0..3 {
                let map = DofMap::new(&m, k, kind);
                let mut seen = vec![0usize; map.dim()];
                for v in 0..m.n_vertices() {
                    map.vertex(v).for_each(|i| seen[i] += 1);
                }
                for e in 0..m.n_edges() {
                    map.edge(e).for_each(|i| seen[i] += 1);
                }
                for c in 0..m.n_cells() {
                    map.cell(c).for_each(|i| seen[i] += 1);
                }
                assert!(seen.iter().all(|&s| s == 1));
                // every global dof is reached from some cell
                let mut hit = vec![false; map.dim()];
                for c in 0..m.n_cells() {
                    map.local_dofs(&m, c).into_iter().for_each(|i| hit[i] = true);
                }
                assert!(hit.into_iter().all(|h| h));
            }
        }
    }

    #[test]
    fn boundary_dofs() {
        let m = generate_cartesian::<f64>(2).unwrap();
        let map = DofMap::new(&m, 0, SpaceKind::XGrad);
        assert_eq!(map.boundary.len(), 8 * 2 + 8 * 2);
    }
}
