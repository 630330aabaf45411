//! Polygonal meshes: topology, orientation conventions and generators.
//!
//! Conventions: `t_E` points from the lower to the higher vertex id,
//! `n_E = t_E^⊥` with `(a, b)^⊥ = (-b, a)`, and `ω_CE ∈ {-1, +1}` is chosen
//! so that `ω_CE n_E` points out of `C`.

mod generate;
pub mod geometry;
mod io;
mod regularity;

use std::collections::HashMap;

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::Real;

pub use generate::{generate_cartesian, generate_hexagonal, perturb};
pub use io::{fmt17, load_mesh, MeshFile};
pub use regularity::{regularity_report, RegularityReport};

#[derive(Clone, Debug)]
pub struct Edge<T: Real> {
    /// Endpoints, lower id first.
    pub vertices: [usize; 2],
    pub tangent: Vector2<T>,
    pub normal: Vector2<T>,
    pub length: T,
    pub midpoint: Vector2<T>,
    /// Adjacent cells in discovery order (one for boundary edges).
    pub cells: Vec<usize>,
}

impl<T: Real> Edge<T> {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }
}

#[derive(Clone, Debug)]
pub struct Cell<T: Real> {
    /// Counterclockwise vertex loop.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub edges: Vec<usize>,
    pub orientations: Vec<T>,
    /// Inscribed-ball center x_C.
    pub center: Vector2<T>,
    pub inradius: T,
    pub centroid: Vector2<T>,
    pub diameter: T,
    pub area: T,
}

/// Immutable polygonal mesh.
#[derive(Clone, Debug)]
pub struct Mesh<T: Real> {
    vertices: Vec<Vector2<T>>,
    edges: Vec<Edge<T>>,
    cells: Vec<Cell<T>>,
    vertex_boundary: Vec<bool>,
}

/// Geometry of a single cell as returned by [`Mesh::cell_geometry`].
#[derive(Clone, Debug)]
pub struct CellGeometry<T: Real> {
    pub center: Vector2<T>,
    pub diameter: T,
    pub area: T,
    pub edges: Vec<(usize, T)>,
}

impl<T: Real> Mesh<T> {
    /// Builds a mesh from vertex coordinates and cell loops.
    ///
    /// Clockwise loops are reversed (with a warning).
    pub fn from_cells(vertices: Vec<Vector2<T>>, loops: Vec<Vec<usize>>) -> Result<Self> {
        let nv = vertices.len();
        check_duplicates(&vertices)?;
        let mut cells_loops = Vec::with_capacity(loops.len());
        for (c, mut l) in loops.into_iter().enumerate() {
            if l.len() < 3 {
                return Err(Error::InvalidMesh(format!("cell {c} has fewer than 3 vertices")));
            }
            if let Some(&v) = l.iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("cell {c} references missing vertex {v}")));
            }
            let mut seen = l.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != l.len() {
                return Err(Error::InvalidMesh(format!("cell {c} repeats a vertex")));
            }
            let pts: Vec<_> = l.iter().map(|&v| vertices[v]).collect();
            if !geometry::is_simple(&pts) {
                return Err(Error::InvalidMesh(format!("cell {c} is not a simple polygon")));
            }
            let a = geometry::signed_area(&pts);
            if a == T::zero() {
                return Err(Error::InvalidMesh(format!("cell {c} has zero area")));
            }
            if a < T::zero() {
                log::warn!("cell {c} given clockwise; reversed");
                l.reverse();
            }
            cells_loops.push(l);
        }

        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        // directed usage per edge, to detect inconsistent sharing
        let mut usage: Vec<Vec<(usize, bool)>> = Vec::new();
        let mut edges: Vec<Edge<T>> = Vec::new();
        let mut cells = Vec::with_capacity(cells_loops.len());
        for (c, l) in cells_loops.into_iter().enumerate() {
            let n = l.len();
            let mut cedges = Vec::with_capacity(n);
            let mut omegas = Vec::with_capacity(n);
            for i in 0..n {
                let (u, v) = (l[i], l[(i + 1) % n]);
                let key = (u.min(v), u.max(v));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    let (a, b) = (vertices[key.0], vertices[key.1]);
                    let d = b - a;
                    let length = d.norm();
                    let tangent = d / length;
                    edges.push(Edge {
                        vertices: [key.0, key.1],
                        tangent,
                        normal: geometry::perp(&tangent),
                        length,
                        midpoint: (a + b) * T::of(0.5),
                        cells: Vec::new(),
                    });
                    usage.push(Vec::new());
                    edges.len() - 1
                });
                let forward = u < v;
                usage[id].push((c, forward));
                edges[id].cells.push(c);
                cedges.push(id);
                // traversed along t_E on a ccw loop: n_E points inward
                omegas.push(if forward { -T::one() } else { T::one() });
            }
            let pts: Vec<_> = l.iter().map(|&v| vertices[v]).collect();
            let (center, inradius) = geometry::chebyshev_center(&pts);
            cells.push(Cell {
                area: geometry::signed_area(&pts),
                centroid: geometry::centroid(&pts),
                diameter: geometry::diameter(&pts),
                center,
                inradius,
                vertices: l,
                edges: cedges,
                orientations: omegas,
            });
        }
        for (e, u) in usage.iter().enumerate() {
            let ok = match u.as_slice() {
                [_] => true,
                [(c1, f1), (c2, f2)] => f1 != f2 && c1 != c2,
                _ => false,
            };
            if !ok {
                let [a, b] = edges[e].vertices;
                return Err(Error::InvalidMesh(format!("edge ({a}, {b}) is shared inconsistently")));
            }
        }
        let mut vertex_boundary = vec![false; nv];
        let mut referenced = vec![false; nv];
        for e in &edges {
            for &v in &e.vertices {
                referenced[v] = true;
                if e.is_boundary() {
                    vertex_boundary[v] = true;
                }
            }
        }
        if let Some(v) = referenced.iter().position(|r| !r) {
            return Err(Error::InvalidMesh(format!("vertex {v} belongs to no cell")));
        }
        Ok(Self { vertices, edges, cells, vertex_boundary })
    }

    pub fn vertices(&self) -> &[Vector2<T>] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }
    pub fn cells(&self) -> &[Cell<T>] {
        &self.cells
    }
    pub fn vertex(&self, v: usize) -> Vector2<T> {
        self.vertices[v]
    }
    pub fn edge(&self, e: usize) -> &Edge<T> {
        &self.edges[e]
    }
    pub fn cell(&self, c: usize) -> &Cell<T> {
        &self.cells[c]
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_boundary[v]
    }

    /// Mesh size h = max_C h_C.
    pub fn h(&self) -> T {
        self.cells.iter().fold(T::zero(), |h, c| h.max(c.diameter))
    }

    pub fn cell_points(&self, c: usize) -> Vec<Vector2<T>> {
        self.cells[c].vertices.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_geometry(&self, c: usize) -> Result<CellGeometry<T>> {
        let cell = self
            .cells
            .get(c)
            .ok_or_else(|| Error::InvalidArgument(format!("cell id {c} out of range")))?;
        Ok(CellGeometry {
            center: cell.center,
            diameter: cell.diameter,
            area: cell.area,
            edges: cell.edges.iter().copied().zip(cell.orientations.iter().copied()).collect(),
        })
    }

    /// Boundary edge ids in increasing order.
    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_boundary()).collect()
    }

    /// Cells incident to each vertex.
    pub fn vertex_cells(&self) -> Vec<Vec<usize>> {
        let mut vc = vec![Vec::new(); self.vertices.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in &cell.vertices {
                vc[v].push(c);
            }
        }
        vc
    }

    /// Converts the geometry to another scalar type.
    pub fn cast<U: Real>(&self) -> Result<Mesh<U>> {
        let verts = self
            .vertices
            .iter()
            .map(|p| Vector2::new(U::of(p.x.to_f64_lossy()), U::of(p.y.to_f64_lossy())))
            .collect();
        Mesh::from_cells(verts, self.cells.iter().map(|c| c.vertices.clone()).collect())
    }
}

fn check_duplicates<T: Real>(vertices: &[Vector2<T>]) -> Result<()> {
    let tol = T::of(1e-12);
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].x.partial_cmp(&vertices[b].x).unwrap_or(std::cmp::Ordering::Equal));
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            if vertices[b].x - vertices[a].x > tol {
                break;
            }
            if (vertices[b] - vertices[a]).norm() <= tol {
                return Err(Error::InvalidMesh(format!("vertices {a} and {b} coincide")));
            }
        }
    }
    Ok(())
}
