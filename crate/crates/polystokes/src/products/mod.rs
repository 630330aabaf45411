//! Stabilized discrete L² products, component norms and monitors.

mod local;
mod monitors;

pub use local::{l2mat_edge_values, LocalProductMatrices};
pub use monitors::{inverse_inequality_monitor, norm_equivalence_monitor, poincare_monitor, potential_integral_rows, EquivalenceRange};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, TripletBuilder};
use crate::operators::Operators;
use crate::spaces::{Discretization, DofVector, SpaceKind};
use crate::Real;

/// Products of all cells.
#[derive(Clone, Debug)]
pub struct Products<T: Real> {
    pub local: Vec<LocalProductMatrices<T>>,
}

impl<T: Real> Products<T> {
    pub fn new(disc: &Discretization<T>, ops: &Operators<T>) -> Result<Self> {
        let local = disc
            .contexts
            .par_iter()
            .zip(&ops.local)
            .map(|(ctx, lo)| LocalProductMatrices::new(ctx, lo))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { local })
    }

    fn assemble(&self, disc: &Discretization<T>, kind: SpaceKind, pick: impl Fn(&LocalProductMatrices<T>) -> &DMatrix<T>) -> SparseMatrix<T> {
        let map = disc.map(kind);
        let mut b = TripletBuilder::new(map.dim(), map.dim());
        for (c, lp) in self.local.iter().enumerate() {
            let idx = map.local_dofs(&disc.mesh, c);
            b.add_block(&idx, &idx, pick(lp));
        }
        b.build()
    }

    /// Global Gram matrix of sp_∇.
    pub fn grad_matrix(&self, disc: &Discretization<T>) -> SparseMatrix<T> {
        self.assemble(disc, SpaceKind::XGrad, |lp| &lp.grad)
    }

    /// Global Gram matrix of sp_L²mat.
    pub fn l2mat_matrix(&self, disc: &Discretization<T>) -> SparseMatrix<T> {
        self.assemble(disc, SpaceKind::XL2Mat, |lp| &lp.l2mat)
    }

    /// Global stabilization part of sp_L²mat.
    pub fn l2mat_stab_matrix(&self, disc: &Discretization<T>) -> SparseMatrix<T> {
        self.assemble(disc, SpaceKind::XL2Mat, |lp| &lp.l2mat_stab)
    }

    /// Global stabilization part of sp_∇.
    pub fn grad_stab_matrix(&self, disc: &Discretization<T>) -> SparseMatrix<T> {
        self.assemble(disc, SpaceKind::XGrad, |lp| &lp.grad_stab)
    }

    /// a_h(v, w) = μ Σ_C sp_L²mat(TGRAD v, TGRAD w) on X_∇.
    pub fn stiffness(&self, disc: &Discretization<T>, ops: &Operators<T>, mu: T) -> SparseMatrix<T> {
        let map = &disc.grad;
        let blocks: Vec<DMatrix<T>> = self
            .local
            .par_iter()
            .zip(&ops.local)
            .map(|(lp, lo)| (lo.tgrad_local.transpose() * &lp.l2mat * &lo.tgrad_local) * mu)
            .collect();
        let mut b = TripletBuilder::new(map.dim(), map.dim());
        for (c, blk) in blocks.iter().enumerate() {
            let idx = map.local_dofs(&disc.mesh, c);
            b.add_block(&idx, &idx, blk);
        }
        b.build()
    }

    /// Component norm of a dof vector: cell components in L², edge
    /// components in L² weighted by h_E (and, for X_rot, vertex rot dofs
    /// weighted by h_C²), summed over cells.
    pub fn component_norm(&self, disc: &Discretization<T>, x: &DofVector<T>) -> Result<T> {
        let map = disc.map(x.kind);
        if x.values.len() != map.dim() || x.k != disc.k {
            return Err(Error::InvalidArgument(format!("dof vector of length {} does not match {:?} at k={}", x.values.len(), x.kind, disc.k)));
        }
        let sq = (0..disc.mesh.n_cells())
            .map(|c| {
                let xl = x.restrict(map, &disc.mesh, c);
                let n = local::component_matrix(&disc.contexts[c], x.kind);
                (xl.transpose() * n * &xl)[0]
            })
            .fold(T::zero(), |a, b| a + b);
        Ok(sq.max(T::zero()).sqrt())
    }

    /// (‖w‖²_{sp∇} + a_h(w, w))^{1/2}.
    pub fn h1_norm(&self, disc: &Discretization<T>, ops: &Operators<T>, w: &DVector<T>, mu: T) -> T {
        let sp = self.grad_matrix(disc).form(w, w);
        let a = self.stiffness(disc, ops, mu).form(w, w);
        (sp + a).max(T::zero()).sqrt()
    }
}

/// Global component-norm Gram matrix (dense blocks assembled per cell).
pub fn component_matrix<T: Real>(disc: &Discretization<T>, kind: SpaceKind) -> SparseMatrix<T> {
    let map = disc.map(kind);
    let mut b = TripletBuilder::new(map.dim(), map.dim());
    for (c, ctx) in disc.contexts.iter().enumerate() {
        let idx = map.local_dofs(&disc.mesh, c);
        b.add_block(&idx, &idx, &local::component_matrix(ctx, kind));
    }
    b.build()
}
