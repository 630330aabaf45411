//! Mesh families on the unit square.

use std::collections::HashMap;

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{geometry, Mesh};
use crate::error::{Error, Result};
use crate::Real;

/// Uniform `n × n` grid of squares.
pub fn generate_cartesian<T: Real>(n: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cartesian resolution must be at least 1".into()));
    }
    let nn = T::of_usize(n);
    let mut verts = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            verts.push(Vector2::new(T::of_usize(i) / nn, T::of_usize(j) / nn));
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::from_cells(verts, cells)
}

/// Hexagon-dominant tiling of the unit square.
///
/// Rows of (slightly stretched) pointy-top hexagons; the first and last row
/// are cut through the hexagon centers and odd rows are halved at the sides,
/// which leaves pentagons and quadrilaterals along the boundary.
pub fn generate_hexagonal<T: Real>(n: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("hexagonal resolution must be at least 1".into()));
    }
    let rows = ((2.0 * n as f64) / 3f64.sqrt()).round().max(1.0) as usize;
    let w = 1.0 / n as f64;
    let s = 2.0 / (3.0 * rows as f64);
    let mut polys: Vec<Vec<[f64; 2]>> = Vec::new();
    for j in 0..=rows {
        let cy = 1.5 * s * j as f64;
        let centers: Vec<f64> = if j % 2 == 0 {
            (0..n).map(|i| (i as f64 + 0.5) * w).collect()
        } else {
            (0..=n).map(|i| i as f64 * w).collect()
        };
        for cx in centers {
            let hex = vec![
                [cx, cy - s],
                [cx + 0.5 * w, cy - 0.5 * s],
                [cx + 0.5 * w, cy + 0.5 * s],
                [cx, cy + s],
                [cx - 0.5 * w, cy + 0.5 * s],
                [cx - 0.5 * w, cy - 0.5 * s],
            ];
            let clipped = clip_unit_square(hex);
            if clipped.len() >= 3 && polygon_area(&clipped) > 1e-3 * w * s {
                polys.push(clipped);
            }
        }
    }
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut verts: Vec<[f64; 2]> = Vec::new();
    let mut cells = Vec::with_capacity(polys.len());
    for p in polys {
        let mut l = Vec::with_capacity(p.len());
        for q in p {
            let key = ((q[0] * 1e9).round() as i64, (q[1] * 1e9).round() as i64);
            let id = *index.entry(key).or_insert_with(|| {
                verts.push(q);
                verts.len() - 1
            });
            if l.last() != Some(&id) && l.first() != Some(&id) {
                l.push(id);
            }
        }
        cells.push(l);
    }
    let verts = verts.iter().map(|q| Vector2::new(T::of(q[0]), T::of(q[1]))).collect();
    Mesh::from_cells(verts, cells)
}

fn polygon_area(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        * 0.5
}

/// Sutherland-Hodgman clipping against the unit square; exact coordinates are
/// snapped onto the clip lines.
fn clip_unit_square(mut poly: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    // (axis, bound, keep_below)
    for &(axis, bound, below) in &[(0usize, 0.0, false), (0, 1.0, true), (1, 0.0, false), (1, 1.0, true)] {
        let inside = |p: &[f64; 2]| if below { p[axis] <= bound } else { p[axis] >= bound };
        let n = poly.len();
        if n == 0 {
            break;
        }
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..n {
            let cur = poly[i];
            let prev = poly[(i + n - 1) % n];
            let (ci, pi) = (inside(&cur), inside(&prev));
            if ci != pi {
                let t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
                let mut x = [prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])];
                x[axis] = bound;
                if !(pi && prev[axis] == bound) && !(ci && cur[axis] == bound) {
                    out.push(x);
                }
            }
            if ci {
                out.push(cur);
            }
        }
        out.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        poly = out;
    }
    poly
}

/// Randomly displaces interior vertices by at most `amplitude · ℓ_V / 2`, where
/// `ℓ_V` is the shortest edge at the vertex. Boundary vertices stay fixed and
/// every displacement that breaks convexity is halved (up to 5 times).
pub fn perturb<T: Real>(mesh: &Mesh<T>, amplitude: T, seed: u64) -> Result<Mesh<T>> {
    if amplitude < T::zero() || amplitude > T::of(0.3) {
        return Err(Error::InvalidArgument("perturbation amplitude must lie in [0, 0.3]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts = mesh.vertices().to_vec();
    let vcells = mesh.vertex_cells();
    let mut min_edge = vec![T::max_value().unwrap(); mesh.n_vertices()];
    for e in mesh.edges() {
        for &v in &e.vertices {
            min_edge[v] = min_edge[v].min(e.length);
        }
    }
    for v in 0..mesh.n_vertices() {
        // draw unconditionally so the stream does not depend on the topology
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let radius: f64 = rng.gen();
        if mesh.is_boundary_vertex(v) {
            continue;
        }
        let base = verts[v];
        let mut scale = amplitude * min_edge[v] * T::of(0.5 * radius);
        let dir = Vector2::new(T::of(theta.cos()), T::of(theta.sin()));
        let mut accepted = false;
        for _ in 0..6 {
            verts[v] = base + dir * scale;
            let ok = vcells[v].iter().all(|&c| {
                let pts: Vec<_> = mesh.cell(c).vertices.iter().map(|&u| verts[u]).collect();
                geometry::signed_area(&pts) > T::zero() && geometry::is_convex(&pts) && geometry::is_simple(&pts)
            });
            if ok {
                accepted = true;
                break;
            }
            scale *= T::of(0.5);
        }
        if !accepted {
            return Err(Error::InvalidMesh(format!("perturbation of vertex {v} keeps breaking convexity")));
        }
    }
    Mesh::from_cells(verts, mesh.cells().iter().map(|c| c.vertices.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(m: &Mesh<f64>) {
        for c in m.cells() {
            assert!(c.area > 0.0);
            let mut s = Vector2::zeros();
            for (i, &e) in c.edges.iter().enumerate() {
                let edge = m.edge(e);
                s += edge.normal * (c.orientations[i] * edge.length);
            }
            assert!(s.norm() <= 1e-12 * c.diameter);
        }
        for (id, e) in m.edges().iter().enumerate() {
            assert!(e.vertices[0] < e.vertices[1]);
            let om = |c: usize| {
                let cell = m.cell(c);
                cell.orientations[cell.edges.iter().position(|&x| x == id).unwrap()]
            };
            if let [c1, c2] = e.cells[..] {
                assert_eq!(om(c1) + om(c2), 0.0);
            }
        }
    }

    #[test]
    fn cartesian_counts() {
        let m: Mesh<f64> = generate_cartesian(1).unwrap();
        assert_eq!((m.n_cells(), m.n_edges()), (1, 4));
        let m: Mesh<f64> = generate_cartesian(4).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_cells()), (25, 40, 16));
        check_invariants(&m);
        let m: Mesh<f64> = generate_cartesian(8).unwrap();
        assert!((m.h() - 2f64.sqrt() / 8.0).abs() < 1e-15);
        assert!(generate_cartesian::<f64>(0).is_err());
    }

    #[test]
    fn hexagonal_tiling() {
        for n in 1..6 {
            let m: Mesh<f64> = generate_hexagonal(n).unwrap();
            let area: f64 = m.cells().iter().map(|c| c.area).sum();
            assert!((area - 1.0).abs() < 1e-12, "n={n} area={area}");
            for (c, cell) in m.cells().iter().enumerate() {
                let interior = cell.edges.iter().all(|&e| !m.edge(e).is_boundary());
                if interior {
                    assert_eq!(cell.edges.len(), 6);
                }
                assert!(geometry::is_convex(&m.cell_points(c)));
                assert!(geometry::contains(&m.cell_points(c), &cell.center));
            }
            check_invariants(&m);
            assert_eq!(m.n_vertices() + m.n_cells(), m.n_edges() + 1);
        }
        let m: Mesh<f64> = generate_hexagonal(3).unwrap();
        assert!(m.cells().iter().any(|c| c.edges.len() == 6));
    }

    #[test]
    fn perturbation() {
        let base: Mesh<f64> = generate_cartesian(8).unwrap();
        let same = perturb(&base, 0.0, 7).unwrap();
        assert_eq!(same.to_json(), base.to_json());
        let a = perturb(&base, 0.2, 1).unwrap();
        let b = perturb(&base, 0.2, 1).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), base.to_json());
        check_invariants(&a);
        for v in 0..base.n_vertices() {
            let d = (a.vertex(v) - base.vertex(v)).norm();
            if base.is_boundary_vertex(v) {
                assert_eq!(d, 0.0);
            } else {
                assert!(d <= 0.2 * (1.0 / 8.0) / 2.0 + 1e-15);
            }
        }
        assert!(perturb(&base, 0.5, 1).is_err());
    }
}
