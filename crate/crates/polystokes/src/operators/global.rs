//! Assembled global operators.

use rayon::prelude::*;

use super::edge;
use super::local::LocalOperators;
use crate::error::Result;
use crate::linalg::{SparseMatrix, TripletBuilder};
use crate::spaces::Discretization;
use crate::Real;

/// Local operators of every cell together with the assembled matrices.
#[derive(Clone, Debug)]
pub struct Operators<T: Real> {
    pub local: Vec<LocalOperators<T>>,
    /// X_rot → X_∇.
    pub rot: SparseMatrix<T>,
    /// X_∇ → X_L²mat.
    pub tgrad: SparseMatrix<T>,
    /// X_∇ → X_L².
    pub div: SparseMatrix<T>,
}

impl<T: Real> Operators<T> {
    pub fn new(disc: &Discretization<T>) -> Result<Self> {
        let sign = disc.options.vrot_sign;
        let local = disc
            .contexts
            .par_iter()
            .map(|ctx| LocalOperators::new(ctx, sign))
            .collect::<Result<Vec<_>>>()?;
        let rot = assemble_rot(disc, &local)?;
        let tgrad = assemble_tgrad(disc, &local)?;
        let div = assemble_div(disc, &local);
        Ok(Self { local, rot, tgrad, div })
    }

    /// D ∘ ROT, which vanishes for an exact complex.
    pub fn div_rot(&self) -> SparseMatrix<T> {
        self.div.mul(&self.rot)
    }
}

fn assemble_rot<T: Real>(disc: &Discretization<T>, local: &[LocalOperators<T>]) -> Result<SparseMatrix<T>> {
    let (rm, gm, mesh) = (&disc.rot, &disc.grad, &disc.mesh);
    let mut b = TripletBuilder::new(gm.dim(), rm.dim());
    for v in 0..mesh.n_vertices() {
        let (r, g) = (rm.vertex(v).start, gm.vertex(v).start);
        b.push(g, r + 1, T::one());
        b.push(g + 1, r + 2, T::one());
    }
    for (e, ep) in disc.edges.iter().enumerate() {
        let re = edge::rot_edge(ep, disc.k, disc.options.vrot_sign)?;
        let rows = gm.edge_local_dofs(mesh, e);
        let cols = rm.edge_local_dofs(mesh, e);
        let re = re.rows(4, re.nrows() - 4).into_owned();
        b.add_block(&rows[4..], &cols, &re);
    }
    for (c, lo) in local.iter().enumerate() {
        let rows: Vec<usize> = gm.cell(c).collect();
        b.add_block(&rows, &rm.local_dofs(mesh, c), &lo.rot_cell);
    }
    Ok(b.build())
}

fn assemble_tgrad<T: Real>(disc: &Discretization<T>, local: &[LocalOperators<T>]) -> Result<SparseMatrix<T>> {
    let (gm, lm, mesh) = (&disc.grad, &disc.l2mat, &disc.mesh);
    let mut b = TripletBuilder::new(lm.dim(), gm.dim());
    for (e, ep) in disc.edges.iter().enumerate() {
        let te = edge::tgrad_edge(ep, disc.k)?;
        let rows: Vec<usize> = lm.edge(e).collect();
        b.add_block(&rows, &gm.edge_local_dofs(mesh, e), &te);
    }
    for (c, lo) in local.iter().enumerate() {
        let rows: Vec<usize> = lm.cell(c).collect();
        b.add_block(&rows, &gm.local_dofs(mesh, c), &lo.tgrad);
    }
    Ok(b.build())
}

fn assemble_div<T: Real>(disc: &Discretization<T>, local: &[LocalOperators<T>]) -> SparseMatrix<T> {
    let (gm, pm, mesh) = (&disc.grad, &disc.l2, &disc.mesh);
    let mut b = TripletBuilder::new(pm.dim(), gm.dim());
    for (c, lo) in local.iter().enumerate() {
        let rows: Vec<usize> = pm.cell(c).collect();
        b.add_block(&rows, &gm.local_dofs(mesh, c), &lo.div);
    }
    b.build()
}
