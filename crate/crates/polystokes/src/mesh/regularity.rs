use serde::Serialize;

use super::{geometry, Mesh};
use crate::Real;

/// Shape diagnostics of a mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    /// Inscribed radius over diameter, per cell.
    pub inscribed_ratio: Vec<f64>,
    pub min_inscribed_ratio: f64,
    /// min over cells and their edges of h_E / h_C.
    pub min_edge_ratio: f64,
    pub max_vertex_valence: usize,
    /// Number of edges of each cell.
    pub face_count: Vec<usize>,
    pub nonconvex_cells: Vec<usize>,
}

pub fn regularity_report<T: Real>(mesh: &Mesh<T>) -> RegularityReport {
    let mut inscribed_ratio = Vec::with_capacity(mesh.n_cells());
    let mut min_edge_ratio = f64::INFINITY;
    let mut nonconvex_cells = Vec::new();
    for (c, cell) in mesh.cells().iter().enumerate() {
        inscribed_ratio.push((cell.inradius / cell.diameter).to_f64_lossy());
        for &e in &cell.edges {
            min_edge_ratio = min_edge_ratio.min((mesh.edge(e).length / cell.diameter).to_f64_lossy());
        }
        if !geometry::is_convex(&mesh.cell_points(c)) {
            nonconvex_cells.push(c);
        }
    }
    let mut valence = vec![0usize; mesh.n_vertices()];
    for e in mesh.edges() {
        valence[e.vertices[0]] += 1;
        valence[e.vertices[1]] += 1;
    }
    RegularityReport {
        min_inscribed_ratio: inscribed_ratio.iter().copied().fold(f64::INFINITY, f64::min),
        inscribed_ratio,
        min_edge_ratio,
        max_vertex_valence: valence.into_iter().max().unwrap_or(0),
        face_count: mesh.cells().iter().map(|c| c.edges.len()).collect(),
        nonconvex_cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_cartesian, perturb};

    #[test]
    fn unit_square_ratio() {
        let m: Mesh<f64> = generate_cartesian(1).unwrap();
        let r = regularity_report(&m);
        assert!((r.min_inscribed_ratio - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        assert!((r.min_edge_ratio - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.max_vertex_valence, 2);
        assert_eq!(r.face_count, vec![4]);
    }

    #[test]
    fn cartesian_ratio_is_scale_invariant() {
        let r4 = regularity_report(&generate_cartesian::<f64>(4).unwrap());
        let r8 = regularity_report(&generate_cartesian::<f64>(8).unwrap());
        assert!((r4.min_inscribed_ratio - r8.min_inscribed_ratio).abs() < 1e-12);
        assert_eq!(r8.max_vertex_valence, 4);
    }

    #[test]
    fn perturbation_does_not_improve_regularity() {
        let base = generate_cartesian::<f64>(8).unwrap();
        let p = perturb(&base, 0.2, 1).unwrap();
        let (rb, rp) = (regularity_report(&base), regularity_report(&p));
        assert!(rp.min_inscribed_ratio <= rb.min_inscribed_ratio + 1e-12);
        assert!(rp.inscribed_ratio.iter().all(|&x| x > 0.0 && x <= 1.0));
        assert_eq!(rp, regularity_report(&p));
    }
}
