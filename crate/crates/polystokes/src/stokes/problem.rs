use std::fmt;
use std::sync::Arc;

use nalgebra::Vector2;
use serde::Serialize;

use super::manufactured::Manufactured;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::Real;

/// Boundary condition on the velocity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Natural condition μ ∇u n − p n = 0; velocity potential mean fixed.
    Neumann,
    /// u = 0 on the whole boundary; pressure mean fixed.
    Dirichlet,
    /// u = 0 on the listed boundary edges, natural condition elsewhere.
    Mixed(Vec<usize>),
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Neumann => "neumann",
            Self::Dirichlet => "dirichlet",
            Self::Mixed(_) => "mixed",
        }
    }

    /// Whether boundary edge `e` carries the Dirichlet condition.
    pub fn is_dirichlet(&self, e: usize) -> bool {
        match self {
            Self::Neumann => false,
            Self::Dirichlet => true,
            Self::Mixed(d) => d.binary_search(&e).is_ok(),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Forcing<T> = Arc<dyn Fn(&Vector2<T>) -> Vector2<T> + Send + Sync>;

/// −μ Δu + ∇p = f, div u = 0 with the given boundary condition.
#[derive(Clone)]
pub struct StokesProblem<T: Real> {
    pub k: usize,
    pub mu: T,
    pub bc: BoundaryCondition,
    pub forcing: Forcing<T>,
    pub reference: Option<Manufactured>,
}

impl<T: Real> fmt::Debug for StokesProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StokesProblem")
            .field("k", &self.k)
            .field("mu", &self.mu)
            .field("bc", &self.bc)
            .field("reference", &self.reference.as_ref().map(|m| &m.name))
            .finish()
    }
}

impl<T: Real> StokesProblem<T> {
    pub fn new(k: usize, mu: T, bc: BoundaryCondition, forcing: Forcing<T>) -> Self {
        let bc = match bc {
            BoundaryCondition::Mixed(mut d) => {
                d.sort_unstable();
                d.dedup();
                BoundaryCondition::Mixed(d)
            }
            bc => bc,
        };
        Self { k, mu, bc, forcing, reference: None }
    }

    /// Problem whose forcing is derived from a manufactured solution.
    pub fn manufactured(k: usize, mu: T, bc: BoundaryCondition, m: Manufactured) -> Self {
        let mm = m.clone();
        let mut p = Self::new(k, mu, bc, Arc::new(move |x| mm.f(x, mu)));
        p.reference = Some(m);
        p
    }

    /// f ≡ 0.
    pub fn homogeneous(k: usize, mu: T, bc: BoundaryCondition) -> Self {
        Self::new(k, mu, bc, Arc::new(|_| Vector2::zeros()))
    }

    /// Checks μ, the Γ_D edge set and, for manufactured problems, that the
    /// reference satisfies the boundary condition at edge quadrature points.
    pub fn validate(&self, mesh: &Mesh<T>) -> Result<()> {
        if !(self.mu > T::zero()) {
            return Err(Error::InvalidArgument("viscosity must be positive".into()));
        }
        let boundary = mesh.boundary_edges();
        if let BoundaryCondition::Mixed(d) = &self.bc {
            if d.is_empty() {
                return Err(Error::InvalidArgument("mixed condition needs a nonempty Dirichlet edge set".into()));
            }
            if let Some(e) = d.iter().find(|e| boundary.binary_search(e).is_err()) {
                return Err(Error::InvalidArgument(format!("edge {e} is not a boundary edge")));
            }
            if d.len() == boundary.len() {
                return Err(Error::InvalidArgument("mixed condition needs a nonempty Neumann part".into()));
            }
        }
        let Some(m) = &self.reference else { return Ok(()) };
        let tol = T::of(1e-10);
        for &e in &boundary {
            let edge = mesh.edge(e);
            let (a, b) = (mesh.vertex(edge.vertices[0]), mesh.vertex(edge.vertices[1]));
            let n = edge.normal;
            for i in 0..=8 {
                let s = T::of(i as f64 / 8.0);
                let x = a + (b - a) * s;
                let bad = if self.bc.is_dirichlet(e) {
                    m.u(&x).norm() > tol
                } else {
                    (m.grad_u(&x) * n * self.mu - n * m.p(&x)).norm() > tol
                };
                if bad {
                    return Err(Error::IncompatibleBc { name: m.name.clone(), bc: self.bc.name().into() });
                }
            }
        }
        Ok(())
    }
}
