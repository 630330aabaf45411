use nalgebra::DMatrix;
use rayon::prelude::*;

use super::basis::{Basis, SpaceTag};
use super::cell::{CellPolys, RtbBasis};
use super::edge::EdgePolys;
use crate::error::Result;
use crate::mesh::Mesh;
use crate::Real;

/// Edge of a cell seen from that cell.
#[derive(Clone, Debug)]
pub struct LocalEdge<T: Real> {
    pub polys: EdgePolys<T>,
    pub omega: T,
    /// Local indices of the endpoints at ξ = -1/2 and ξ = +1/2.
    pub start: usize,
    pub end: usize,
}

/// Everything a cell needs at degree k.
#[derive(Clone, Debug)]
pub struct CellContext<T: Real> {
    pub k: usize,
    pub cell: usize,
    pub polys: CellPolys<T>,
    pub edges: Vec<LocalEdge<T>>,
    pub vertices: Vec<usize>,
    /// P^{k-1}(C), P^k(C), P^k(C)², P^{k+1}(C)².
    pub p_km1: Basis<T>,
    pub p_k: Basis<T>,
    pub pvec_k: Basis<T>,
    pub pvec_k1: Basis<T>,
    /// G^{k-1}(C) and G^{c,k}(C).
    pub g: Basis<T>,
    pub gc: Basis<T>,
    pub rtb: RtbBasis<T>,
    pub rtb_gram: DMatrix<T>,
}

impl<T: Real> CellContext<T> {
    pub fn new(mesh: &Mesh<T>, cell: usize, k: usize) -> Result<Self> {
        let ki = k as i32;
        let polys = CellPolys::new(mesh, cell, k + 2, 2 * k + 6)?;
        let c = mesh.cell(cell);
        let n = c.vertices.len();
        let mut edges = Vec::with_capacity(n);
        for (i, &e) in c.edges.iter().enumerate() {
            let j = (i + 1) % n;
            let (start, end) = if c.vertices[i] < c.vertices[j] { (i, j) } else { (j, i) };
            edges.push(LocalEdge { polys: EdgePolys::new(mesh, e, k + 2, 2 * k + 6)?, omega: c.orientations[i], start, end });
        }
        let rtb = polys.rtb_basis(ki + 1)?;
        let rtb_gram = polys.gram(&rtb.basis, &rtb.basis);
        Ok(Self {
            k,
            cell,
            p_km1: polys.monomial_basis(ki - 1)?,
            p_k: polys.monomial_basis(ki)?,
            pvec_k: polys.pvec_basis(ki)?,
            pvec_k1: polys.pvec_basis(ki + 1)?,
            g: polys.koszul_basis(SpaceTag::G(ki - 1))?,
            gc: polys.koszul_basis(SpaceTag::Gc(ki))?,
            rtb,
            rtb_gram,
            edges,
            vertices: c.vertices.clone(),
            polys,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
}

/// Contexts of all cells, built in parallel (output in cell order).
pub fn build_contexts<T: Real>(mesh: &Mesh<T>, k: usize) -> Result<Vec<CellContext<T>>> {
    (0..mesh.n_cells()).into_par_iter().map(|c| CellContext::new(mesh, c, k)).collect()
}
