use nalgebra::{DMatrix, DVector, Vector2};

use crate::error::Result;
use crate::operators::{local_dim, LocalOperators};
use crate::polyspace::{CellContext, EdgePolys};
use crate::spaces::SpaceKind;
use crate::Real;

/// Per-cell Gram matrices of sp_∇ (local X_∇ dofs) and sp_L²mat (local
/// X_L²mat dofs), together with their stabilization parts.
#[derive(Clone, Debug)]
pub struct LocalProductMatrices<T: Real> {
    pub cell: usize,
    pub grad: DMatrix<T>,
    pub grad_stab: DMatrix<T>,
    pub l2mat: DMatrix<T>,
    pub l2mat_stab: DMatrix<T>,
}

/// Values at `x` of the orthonormal basis of P^{k+1}(E) used by the X_L²mat
/// edge dofs.
pub fn l2mat_edge_values<T: Real>(ep: &EdgePolys<T>, k: usize, x: &Vector2<T>) -> DVector<T> {
    ep.orthonormal(k as i32 + 1).transpose() * ep.values(x)
}

impl<T: Real> LocalProductMatrices<T> {
    pub fn new(ctx: &CellContext<T>, lo: &LocalOperators<T>) -> Result<Self> {
        let k = ctx.k;
        let polys = &ctx.polys;
        let ng = local_dim(ctx, SpaceKind::XGrad);
        let nd = k + 3;

        let pot = &lo.potential;
        let mut grad_stab = DMatrix::zeros(ng, ng);
        for (j, le) in ctx.edges.iter().enumerate() {
            let ep = &le.polys;
            for (x, &w) in ep.quad.points.iter().zip(&ep.quad.weights) {
                let p = polys.eval_coeffs(&ctx.pvec_k1.coeffs, x) * pot;
                let phi = ep.values(x).transpose();
                let mut d = p;
                let wx = &phi * lo.traces[j].rows(0, nd);
                let wy = &phi * lo.traces[j].rows(nd, nd);
                for c in 0..ng {
                    d[(0, c)] -= wx[c];
                    d[(1, c)] -= wy[c];
                }
                grad_stab += d.transpose() * d * (w * ep.length);
            }
        }
        // the P^{k+1}(C)² basis is orthonormal
        let grad = pot.transpose() * pot + &grad_stab;

        let es = 2 * (k + 2);
        let ne = ctx.edges.len();
        let nm = local_dim(ctx, SpaceKind::XL2Mat);
        let coff = ne * es;
        let rtb = &ctx.rtb.basis.coeffs;
        let mut l2mat_stab = DMatrix::zeros(nm, nm);
        for (j, le) in ctx.edges.iter().enumerate() {
            let ep = &le.polys;
            let t = ep.tangent;
            for (x, &w) in ep.quad.points.iter().zip(&ep.quad.weights) {
                let v = polys.eval_coeffs(rtb, x);
                let phi = l2mat_edge_values(ep, k, x);
                let mut d = DMatrix::zeros(2, nm);
                for m in 0..rtb.ncols() {
                    d[(0, coff + m)] = v[(0, m)] * t.x + v[(1, m)] * t.y;
                    d[(1, coff + m)] = v[(2, m)] * t.x + v[(3, m)] * t.y;
                }
                for i in 0..k + 2 {
                    d[(0, j * es + i)] -= phi[i];
                    d[(1, j * es + k + 2 + i)] -= phi[i];
                }
                l2mat_stab += d.transpose() * d * (w * ep.length);
            }
        }
        let mut l2mat = l2mat_stab.clone();
        let mut blk = l2mat.view_mut((coff, coff), (rtb.ncols(), rtb.ncols()));
        blk += &ctx.rtb_gram;

        Ok(Self { cell: ctx.cell, grad: symmetrize(grad), grad_stab: symmetrize(grad_stab), l2mat: symmetrize(l2mat), l2mat_stab: symmetrize(l2mat_stab) })
    }
}

fn symmetrize<T: Real>(m: DMatrix<T>) -> DMatrix<T> {
    (&m + m.transpose()) * T::of(0.5)
}

/// Local Gram matrix of the component norm of `kind`.
pub(crate) fn component_matrix<T: Real>(ctx: &CellContext<T>, kind: SpaceKind) -> DMatrix<T> {
    let k = ctx.k;
    let n = local_dim(ctx, kind);
    let [vs, es, cs] = kind.block_sizes(k);
    let nv = ctx.n_vertices();
    let coff = nv * (vs + es);
    let mut out = DMatrix::zeros(n, n);
    for i in coff..coff + cs {
        out[(i, i)] = T::one();
    }
    match kind {
        SpaceKind::XL2 => {}
        SpaceKind::XL2Mat => {
            out.view_mut((coff, coff), (cs, cs)).copy_from(&ctx.rtb_gram);
            for (j, le) in ctx.edges.iter().enumerate() {
                for i in 0..es {
                    out[(j * es + i, j * es + i)] = le.polys.length;
                }
            }
        }
        SpaceKind::XGrad => {
            let nd = k + 3;
            for (j, le) in ctx.edges.iter().enumerate() {
                let ep = &le.polys;
                let tr = crate::operators::edge::grad_trace(ep, k).expect("edge reconstruction");
                let idx = crate::operators::local::edge_to_cell(ctx, j, kind);
                let m = (tr.rows(0, nd).transpose() * &ep.mass * tr.rows(0, nd) + tr.rows(nd, nd).transpose() * &ep.mass * tr.rows(nd, nd)) * ep.length;
                scatter(&mut out, &idx, &m);
            }
        }
        SpaceKind::XRot => {
            let h = ctx.polys.frame.scale;
            for s in 0..nv {
                out[(3 * s + 1, 3 * s + 1)] = h * h;
                out[(3 * s + 2, 3 * s + 2)] = h * h;
            }
            for (j, le) in ctx.edges.iter().enumerate() {
                let ep = &le.polys;
                let tr = crate::operators::edge::rot_trace(ep, k).expect("edge reconstruction");
                let idx = crate::operators::local::edge_to_cell(ctx, j, kind);
                let mut m = tr.transpose() * &ep.mass * &tr;
                for i in 0..=k {
                    m[(6 + k + i, 6 + k + i)] += T::one();
                }
                scatter(&mut out, &idx, &(m * ep.length));
            }
        }
    }
    out
}

fn scatter<T: Real>(out: &mut DMatrix<T>, idx: &[usize], m: &DMatrix<T>) {
    for (a, &r) in idx.iter().enumerate() {
        for (b, &c) in idx.iter().enumerate() {
            out[(r, c)] += m[(a, b)];
        }
    }
}
