//! Spectral monitors for the norm-equivalence, inverse and Poincaré
//! inequalities. These are diagnostic quantities, not pass/fail checks.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{local::component_matrix, Products};
use crate::error::{Error, Result};
use crate::operators::Operators;
use crate::spaces::{Discretization, SpaceKind};
use crate::Real;

/// Range of a ratio over cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquivalenceRange {
    pub min: f64,
    pub max: f64,
}

/// Eigenvalues of L⁻¹ A L⁻ᵀ with N = L Lᵀ, ascending.
fn generalized_eigenvalues<T: Real>(a: &DMatrix<T>, n: &DMatrix<T>, what: &str, cell: usize) -> Result<Vec<T>> {
    let l = n.clone().cholesky().ok_or_else(|| Error::SingularLocal { cell, what: what.into() })?.l();
    let li = l.clone().try_inverse().ok_or_else(|| Error::SingularLocal { cell, what: what.into() })?;
    let m = &li * a * li.transpose();
    let m = (&m + m.transpose()) * T::of(0.5);
    let mut ev: Vec<T> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ev)
}

/// Per-cell range of (sp_∇-norm / component norm) on X_∇.
pub fn norm_equivalence_monitor<T: Real>(disc: &Discretization<T>, prods: &Products<T>) -> Result<EquivalenceRange> {
    let mut r = EquivalenceRange { min: f64::INFINITY, max: 0.0 };
    for (ctx, lp) in disc.contexts.iter().zip(&prods.local) {
        let n = component_matrix(ctx, SpaceKind::XGrad);
        let ev = generalized_eigenvalues(&lp.grad, &n, "component norm", ctx.cell)?;
        r.min = r.min.min(ev[0].max(T::zero()).sqrt().to_f64_lossy());
        r.max = r.max.max(ev[ev.len() - 1].sqrt().to_f64_lossy());
    }
    Ok(r)
}

/// max_C sup_w h_C ‖TGRAD_C w‖_{L²(C)} / ‖w‖_{opn,C}.
pub fn inverse_inequality_monitor<T: Real>(disc: &Discretization<T>, ops: &Operators<T>) -> Result<f64> {
    let mut worst = 0.0f64;
    for (ctx, lo) in disc.contexts.iter().zip(&ops.local) {
        let a = lo.tgrad.transpose() * &ctx.rtb_gram * &lo.tgrad;
        let n = component_matrix(ctx, SpaceKind::XGrad);
        let ev = generalized_eigenvalues(&a, &n, "component norm", ctx.cell)?;
        let h = disc.mesh.cell(ctx.cell).diameter;
        worst = worst.max((h * ev[ev.len() - 1].max(T::zero()).sqrt()).to_f64_lossy());
    }
    Ok(worst)
}

/// min a_h(w, w) / ‖w‖²_opn over w with Σ_C ∫_C P_C w = 0 (μ = 1), by a
/// dense eigenproblem. Meant for small meshes.
pub fn poincare_monitor<T: Real>(disc: &Discretization<T>, ops: &Operators<T>, prods: &Products<T>) -> Result<f64> {
    let a = prods.stiffness(disc, ops, T::one()).to_dense();
    let n = super::component_matrix(disc, SpaceKind::XGrad).to_dense();
    let c = potential_integral_rows(disc, ops);
    let l = n.cholesky().ok_or(Error::SingularSystem("component norm Gram matrix".into()))?.l();
    let li = l.try_inverse().ok_or(Error::SingularSystem("component norm Gram matrix".into()))?;
    let at = &li * &a * li.transpose();
    let ct = &c * li.transpose();
    // orthonormal rows spanning the constraint directions
    let q = ct.transpose().qr().q();
    let p = DMatrix::identity(at.nrows(), at.nrows()) - &q * q.transpose();
    let sigma = at.amax() * T::of(1e3) + T::one();
    let m = &p * &at * &p + &q * q.transpose() * sigma;
    let m = (&m + m.transpose()) * T::of(0.5);
    let ev = SymmetricEigen::new(m).eigenvalues;
    Ok(ev.min().to_f64_lossy())
}

/// Rows of the map w ↦ Σ_C ∫_C P_C w (one row per component).
pub fn potential_integral_rows<T: Real>(disc: &Discretization<T>, ops: &Operators<T>) -> DMatrix<T> {
    let map = &disc.grad;
    let mut out = DMatrix::zeros(2, map.dim());
    for (c, (ctx, lo)) in disc.contexts.iter().zip(&ops.local).enumerate() {
        let n = ctx.polys.amb.n;
        let ints = ctx.polys.mass.row(0);
        let psi = &ctx.pvec_k1.coeffs;
        let idx = map.local_dofs(&disc.mesh, c);
        for comp in 0..2 {
            let row = ints * psi.rows(comp * n, n) * &lo.potential;
            for (j, &g) in idx.iter().enumerate() {
                out[(comp, g)] += row[j];
            }
        }
    }
    out
}
