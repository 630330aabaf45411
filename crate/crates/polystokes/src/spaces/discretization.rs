use rayon::prelude::*;

use super::dofmap::{DofMap, SpaceKind};
use crate::error::Result;
use crate::mesh::Mesh;
use crate::polyspace::{build_contexts, quadrature, CellContext, EdgePolys, Quadrature};
use crate::Real;

/// Sign used for the normal part of VROT on edges. `Flipped` breaks the
/// complex on purpose and only exists as a negative control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VrotSign {
    #[default]
    Standard,
    Flipped,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub vrot_sign: VrotSign,
}

/// Mesh, degree, per-cell contexts and dof maps of the four spaces.
#[derive(Clone, Debug)]
pub struct Discretization<T: Real> {
    pub mesh: Mesh<T>,
    pub k: usize,
    pub contexts: Vec<CellContext<T>>,
    pub edges: Vec<EdgePolys<T>>,
    pub rot: DofMap,
    pub grad: DofMap,
    pub l2mat: DofMap,
    pub l2: DofMap,
    pub options: Options,
}

impl<T: Real> Discretization<T> {
    pub fn new(mesh: &Mesh<T>, k: usize) -> Result<Self> {
        Self::with_options(mesh, k, Options::default())
    }

    pub fn with_options(mesh: &Mesh<T>, k: usize, options: Options) -> Result<Self> {
        let contexts = build_contexts(mesh, k)?;
        let edges = (0..mesh.n_edges())
            .into_par_iter()
            .map(|e| EdgePolys::new(mesh, e, k + 2, 2 * k + 6))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mesh: mesh.clone(),
            k,
            contexts,
            edges,
            rot: DofMap::new(mesh, k, SpaceKind::XRot),
            grad: DofMap::new(mesh, k, SpaceKind::XGrad),
            l2mat: DofMap::new(mesh, k, SpaceKind::XL2Mat),
            l2: DofMap::new(mesh, k, SpaceKind::XL2),
            options,
        })
    }

    pub fn map(&self, kind: SpaceKind) -> &DofMap {
        match kind {
            SpaceKind::XRot => &self.rot,
            SpaceKind::XGrad => &self.grad,
            SpaceKind::XL2Mat => &self.l2mat,
            SpaceKind::XL2 => &self.l2,
        }
    }

    /// Exactness used for integrals against analytic data.
    pub fn rhs_degree(&self) -> usize {
        2 * self.k + 8
    }

    pub fn cell_rhs_quadrature(&self, c: usize) -> Result<Quadrature<T>> {
        let cell = self.mesh.cell(c);
        quadrature::polygon(&self.mesh.cell_points(c), &cell.center, self.rhs_degree())
    }

    pub fn edge_rhs_quadrature(&self, e: usize) -> Quadrature<T> {
        let [a, b] = self.mesh.edge(e).vertices;
        quadrature::segment(&self.mesh.vertex(a), &self.mesh.vertex(b), self.rhs_degree())
    }
}
