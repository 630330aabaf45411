use std::time::Instant;

use nalgebra::{DMatrix, DVector, Vector2};
use rayon::prelude::*;

use super::problem::{BoundaryCondition, StokesProblem};
use crate::error::Result;
use crate::linalg::{SparseMatrix, TripletBuilder};
use crate::mesh::Mesh;
use crate::operators::Operators;
use crate::products::{potential_integral_rows, Products};
use crate::spaces::{Discretization, Options};
use crate::Real;

/// Discretization, operators and products of one mesh at one degree.
#[derive(Clone, Debug)]
pub struct Scheme<T: Real> {
    pub disc: Discretization<T>,
    pub ops: Operators<T>,
    pub prods: Products<T>,
}

impl<T: Real> Scheme<T> {
    pub fn new(mesh: &Mesh<T>, k: usize) -> Result<Self> {
        Self::with_options(mesh, k, Options::default())
    }

    pub fn with_options(mesh: &Mesh<T>, k: usize, options: Options) -> Result<Self> {
        let disc = Discretization::with_options(mesh, k, options)?;
        let ops = Operators::new(&disc)?;
        let prods = Products::new(&disc, &ops)?;
        Ok(Self { disc, ops, prods })
    }
}

/// Symmetric saddle-point system in the unknowns (free velocity dofs,
/// pressure dofs, Lagrange multipliers):
///
/// ```text
/// [ A   −Bᵀ  C_uᵀ ] [u]   [L]
/// [ −B   0   C_pᵀ ] [p] = [0]
/// [ C_u C_p   0   ] [λ]   [0]
/// ```
#[derive(Clone, Debug)]
pub struct SaddleSystem<T: Real> {
    pub matrix: SparseMatrix<T>,
    pub rhs: DVector<T>,
    /// Global X_∇ index of each free velocity unknown.
    pub free: Vec<usize>,
    /// Eliminated (Dirichlet) X_∇ dofs, sorted.
    pub eliminated: Vec<usize>,
    pub n_velocity: usize,
    pub n_pressure: usize,
    pub n_multipliers: usize,
    /// Wall-clock assembly time in seconds.
    pub assembly_seconds: f64,
}

impl<T: Real> SaddleSystem<T> {
    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn dim(&self) -> usize {
        self.free.len() + self.n_pressure + self.n_multipliers
    }
}

/// X_∇ dofs fixed to zero by the boundary condition.
pub fn dirichlet_dofs<T: Real>(disc: &Discretization<T>, bc: &BoundaryCondition) -> Vec<usize> {
    let map = &disc.grad;
    let mesh = &disc.mesh;
    let mut out = Vec::new();
    match bc {
        BoundaryCondition::Neumann => {}
        BoundaryCondition::Dirichlet => out = map.boundary.clone(),
        BoundaryCondition::Mixed(edges) => {
            for &e in edges {
                out.extend(map.edge_local_dofs(mesh, e));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Σ_C ∫_C P_C v · f for every X_∇ dof.
pub fn load_vector<T: Real>(scheme: &Scheme<T>, forcing: &(dyn Fn(&Vector2<T>) -> Vector2<T> + Sync)) -> Result<DVector<T>> {
    let disc = &scheme.disc;
    let locals = disc
        .contexts
        .par_iter()
        .zip(&scheme.ops.local)
        .enumerate()
        .map(|(c, (ctx, lo))| {
            let q = disc.cell_rhs_quadrature(c)?;
            let fm = ctx.polys.moments(&ctx.pvec_k1.coeffs, &q, &|x| {
                let f = forcing(x);
                vec![f.x, f.y]
            });
            Ok(lo.potential.transpose() * fm)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = DVector::zeros(disc.grad.dim());
    for (c, l) in locals.iter().enumerate() {
        for (j, g) in disc.grad.local_dofs(&disc.mesh, c).into_iter().enumerate() {
            out[g] += l[j];
        }
    }
    Ok(out)
}

/// Row mapping pressure dofs to Σ_C ∫_C q.
pub fn pressure_integral_row<T: Real>(disc: &Discretization<T>) -> DVector<T> {
    let mut out = DVector::zeros(disc.l2.dim());
    for (c, ctx) in disc.contexts.iter().enumerate() {
        let ints = ctx.polys.mass.row(0) * &ctx.p_k.coeffs;
        out.rows_mut(disc.l2.cell(c).start, ints.len()).copy_from(&ints.transpose());
    }
    out
}

pub fn assemble<T: Real>(scheme: &Scheme<T>, problem: &StokesProblem<T>) -> Result<SaddleSystem<T>> {
    let start = Instant::now();
    let disc = &scheme.disc;
    problem.validate(&disc.mesh)?;
    let ng = disc.grad.dim();
    let np = disc.l2.dim();

    let eliminated = dirichlet_dofs(disc, &problem.bc);
    let mut reduced = vec![usize::MAX; ng];
    let mut free = Vec::with_capacity(ng - eliminated.len());
    {
        let mut it = eliminated.iter().peekable();
        for (g, r) in reduced.iter_mut().enumerate() {
            if it.peek() == Some(&&g) {
                it.next();
                continue;
            }
            *r = free.len();
            free.push(g);
        }
    }
    let nf = free.len();

    let cu: Option<DMatrix<T>> = matches!(problem.bc, BoundaryCondition::Neumann).then(|| potential_integral_rows(disc, &scheme.ops));
    let cp: Option<DVector<T>> = matches!(problem.bc, BoundaryCondition::Dirichlet).then(|| pressure_integral_row(disc));
    let nm = cu.as_ref().map_or(0, |c| c.nrows()) + usize::from(cp.is_some());
    let n = nf + np + nm;

    let a = scheme.prods.stiffness(disc, &scheme.ops, problem.mu);
    let b = &scheme.ops.div;
    let mut tb = TripletBuilder::new(n, n);
    for r in 0..ng {
        if reduced[r] == usize::MAX {
            continue;
        }
        for (c, v) in a.row(r) {
            if reduced[c] != usize::MAX {
                tb.push(reduced[r], reduced[c], v);
            }
        }
    }
    for q in 0..np {
        for (c, v) in b.row(q) {
            if reduced[c] != usize::MAX {
                tb.push(nf + q, reduced[c], -v);
                tb.push(reduced[c], nf + q, -v);
            }
        }
    }
    let mut row = nf + np;
    if let Some(cu) = &cu {
        for i in 0..cu.nrows() {
            for g in 0..ng {
                let v = cu[(i, g)];
                if v != T::zero() && reduced[g] != usize::MAX {
                    tb.push(row, reduced[g], v);
                    tb.push(reduced[g], row, v);
                }
            }
            row += 1;
        }
    }
    if let Some(cp) = &cp {
        for q in 0..np {
            if cp[q] != T::zero() {
                tb.push(row, nf + q, cp[q]);
                tb.push(nf + q, row, cp[q]);
            }
        }
    }

    let load = load_vector(scheme, problem.forcing.as_ref())?;
    let mut rhs = DVector::zeros(n);
    for (r, &g) in free.iter().enumerate() {
        rhs[r] = load[g];
    }
    Ok(SaddleSystem {
        matrix: tb.build(),
        rhs,
        free,
        eliminated,
        n_velocity: ng,
        n_pressure: np,
        n_multipliers: nm,
        assembly_seconds: start.elapsed().as_secs_f64(),
    })
}
