//! Per-cell discrete operators.
//!
//! Cell-local X_∇ dofs: vertex blocks (2 each) and edge blocks (2(k+1) each)
//! in loop order, then the cell block `[G^{k-1} | G^{c,k}]`. Cell-local X_rot
//! dofs follow the same pattern with blocks 3, 2k+1 and dim P^{k-1}.

use nalgebra::{DMatrix, DVector, Vector2};

use super::edge;
use crate::error::{Error, Result};
use crate::polyspace::CellContext;
use crate::spaces::{SpaceKind, VrotSign};
use crate::Real;

#[derive(Clone, Debug)]
pub struct LocalOperators<T: Real> {
    pub cell: usize,
    /// Per local edge: cell-local X_∇ dofs → w_E monomial coefficients.
    pub traces: Vec<DMatrix<T>>,
    /// Per local edge: cell-local X_rot dofs → v_E monomial coefficients.
    pub rot_traces: Vec<DMatrix<T>>,
    /// TGRAD_C in RTb^{k+1}(C) coefficients.
    pub tgrad: DMatrix<T>,
    /// P_C in the orthonormal basis of P^{k+1}(C)².
    pub potential: DMatrix<T>,
    /// D_C in the orthonormal basis of P^k(C).
    pub div: DMatrix<T>,
    /// R_C in the orthonormal basis of P^k(C)².
    pub rot_full: DMatrix<T>,
    /// X_∇ cell components of ROT.
    pub rot_cell: DMatrix<T>,
    /// Cell-local X_∇ → cell-local X_L²mat (edges, then cell).
    pub tgrad_local: DMatrix<T>,
    /// Cell-local X_rot → cell-local X_∇.
    pub rot_local: DMatrix<T>,
}

/// Positions of edge-local dofs inside the cell-local numbering.
pub fn edge_to_cell<T: Real>(ctx: &CellContext<T>, j: usize, kind: SpaceKind) -> Vec<usize> {
    let k = ctx.k;
    let n = ctx.n_vertices();
    let [vs, es, _] = kind.block_sizes(k);
    let le = &ctx.edges[j];
    let mut idx: Vec<usize> = (0..vs).map(|i| le.start * vs + i).collect();
    idx.extend((0..vs).map(|i| le.end * vs + i));
    idx.extend((0..es).map(|i| n * vs + j * es + i));
    idx
}

/// Number of cell-local dofs.
pub fn local_dim<T: Real>(ctx: &CellContext<T>, kind: SpaceKind) -> usize {
    let [vs, es, cs] = kind.block_sizes(ctx.k);
    ctx.n_vertices() * (vs + es) + cs
}

fn cell_offset<T: Real>(ctx: &CellContext<T>, kind: SpaceKind) -> usize {
    let [vs, es, _] = kind.block_sizes(ctx.k);
    ctx.n_vertices() * (vs + es)
}

fn scatter_cols<T: Real>(src: &DMatrix<T>, cols: &[usize], ncols: usize) -> DMatrix<T> {
    let mut out = DMatrix::zeros(src.nrows(), ncols);
    for (j, &c) in cols.iter().enumerate() {
        let col = out.column(c) + src.column(j);
        out.set_column(c, &col);
    }
    out
}

impl<T: Real> LocalOperators<T> {
    pub fn new(ctx: &CellContext<T>, sign: VrotSign) -> Result<Self> {
        let k = ctx.k;
        let polys = &ctx.polys;
        let amb = &polys.amb;
        let ng = local_dim(ctx, SpaceKind::XGrad);
        let nr = local_dim(ctx, SpaceKind::XRot);
        let goff = cell_offset(ctx, SpaceKind::XGrad);
        let (n_g, n_gc) = (ctx.g.dim(), ctx.gc.dim());

        let mut traces = Vec::with_capacity(ctx.edges.len());
        let mut rot_traces = Vec::with_capacity(ctx.edges.len());
        for (j, le) in ctx.edges.iter().enumerate() {
            let t = edge::grad_trace(&le.polys, k)?;
            traces.push(scatter_cols(&t, &edge_to_cell(ctx, j, SpaceKind::XGrad), ng));
            let r = edge::rot_trace(&le.polys, k)?;
            rot_traces.push(scatter_cols(&r, &edge_to_cell(ctx, j, SpaceKind::XRot), nr));
        }
        let nd = k + 3;
        // Σ_E ω ∫_E w_E · (V n_E) for matrix fields V given by coefficient columns
        let edge_term = |v: &DMatrix<T>| -> DMatrix<T> {
            let mut out = DMatrix::zeros(v.ncols(), ng);
            for (j, le) in ctx.edges.iter().enumerate() {
                let n = le.polys.normal;
                for (x, &w) in le.polys.quad.points.iter().zip(&le.polys.quad.weights) {
                    let vals = polys.eval_coeffs(v, x);
                    let phi = le.polys.values(x);
                    let wx = phi.transpose() * traces[j].rows(0, nd);
                    let wy = phi.transpose() * traces[j].rows(nd, nd);
                    for m in 0..v.ncols() {
                        let vn0 = vals[(0, m)] * n.x + vals[(1, m)] * n.y;
                        let vn1 = vals[(2, m)] * n.x + vals[(3, m)] * n.y;
                        let f = le.omega * w;
                        for i in 0..ng {
                            out[(m, i)] += f * (vn0 * wx[i] + vn1 * wy[i]);
                        }
                    }
                }
            }
            out
        };

        // TGRAD_C
        let rtb = &ctx.rtb.basis.coeffs;
        let [n_rbc, n_rb, _] = ctx.rtb.parts;
        let tdiv_rtb = amb.tdiv() * rtb;
        let mut rhs = edge_term(rtb);
        let gc_tdiv = polys.gram_coeffs(&ctx.gc.coeffs, &tdiv_rtb);
        let g_tdiv = polys.gram_coeffs(&ctx.g.coeffs, &tdiv_rtb);
        for m in 0..n_rbc {
            for i in 0..n_gc {
                rhs[(m, goff + n_g + i)] -= gc_tdiv[(i, m)];
            }
        }
        for m in n_rbc..n_rbc + n_rb {
            for i in 0..n_g {
                rhs[(m, goff + i)] -= g_tdiv[(i, m)];
            }
        }
        let chol = ctx
            .rtb_gram
            .clone()
            .cholesky()
            .ok_or_else(|| Error::SingularLocal { cell: ctx.cell, what: "RTb Gram matrix".into() })?;
        let tgrad = chol.solve(&rhs);

        // P_C: test with V_j = DIV^{-1} ψ_j row-wise, so that TDIV V_j = ψ_j
        let psi = &ctx.pvec_k1.coeffs;
        let nn = amb.n;
        let di = amb.div_inverse();
        let mut vj = DMatrix::zeros(4 * nn, psi.ncols());
        vj.rows_mut(0, 2 * nn).copy_from(&(&di * psi.rows(0, nn)));
        vj.rows_mut(2 * nn, 2 * nn).copy_from(&(&di * psi.rows(nn, nn)));
        let potential = edge_term(&vj) - polys.gram_coeffs(&vj, rtb) * &tgrad;

        // D_C = Tr TGRAD_C
        let tr_rtb = amb.trace() * rtb;
        let div = polys.gram_coeffs(&ctx.p_k.coeffs, &tr_rtb) * &tgrad;

        // R_C
        let roff = cell_offset(ctx, SpaceKind::XRot);
        let psi_k = &ctx.pvec_k.coeffs;
        let rot_psi = amb.rot() * psi_k;
        let vc = polys.gram_coeffs(&ctx.p_km1.coeffs, &rot_psi);
        let mut rrhs = DMatrix::zeros(psi_k.ncols(), nr);
        for j in 0..psi_k.ncols() {
            for l in 0..ctx.p_km1.dim() {
                rrhs[(j, roff + l)] += vc[(l, j)];
            }
        }
        for (j, le) in ctx.edges.iter().enumerate() {
            let t = le.polys.tangent;
            for (x, &w) in le.polys.quad.points.iter().zip(&le.polys.quad.weights) {
                let vals = polys.eval_coeffs(psi_k, x);
                let ve = le.polys.values(x).transpose() * &rot_traces[j];
                for m in 0..psi_k.ncols() {
                    let pt = vals[(0, m)] * t.x + vals[(1, m)] * t.y;
                    let f = le.omega * w * pt;
                    for i in 0..nr {
                        rrhs[(m, i)] += f * ve[i];
                    }
                }
            }
        }
        let gram_k = polys.gram_coeffs(psi_k, psi_k);
        let rot_full = gram_k
            .cholesky()
            .ok_or_else(|| Error::SingularLocal { cell: ctx.cell, what: "P^k vector Gram matrix".into() })?
            .solve(&rrhs);
        let proj = polys.gram_coeffs(&ctx.g.coeffs, psi_k);
        let projc = polys.gram_coeffs(&ctx.gc.coeffs, psi_k);
        let mut rot_cell = DMatrix::zeros(n_g + n_gc, nr);
        rot_cell.rows_mut(0, n_g).copy_from(&(proj * &rot_full));
        rot_cell.rows_mut(n_g, n_gc).copy_from(&(projc * &rot_full));

        // full local Jacobian: edge derivatives then TGRAD_C
        let ne = ctx.edges.len();
        let es = 2 * (k + 2);
        let mut tgrad_local = DMatrix::zeros(ne * es + tgrad.nrows(), ng);
        for (j, le) in ctx.edges.iter().enumerate() {
            let te = edge::tgrad_edge(&le.polys, k)?;
            let te = scatter_cols(&te, &edge_to_cell(ctx, j, SpaceKind::XGrad), ng);
            tgrad_local.rows_mut(j * es, es).copy_from(&te);
        }
        tgrad_local.rows_mut(ne * es, tgrad.nrows()).copy_from(&tgrad);

        let mut rot_local = DMatrix::zeros(ng, nr);
        for s in 0..ctx.n_vertices() {
            rot_local[(2 * s, 3 * s + 1)] = T::one();
            rot_local[(2 * s + 1, 3 * s + 2)] = T::one();
        }
        for (j, le) in ctx.edges.iter().enumerate() {
            let re = edge::rot_edge(&le.polys, k, sign)?;
            let rows = edge_to_cell(ctx, j, SpaceKind::XGrad);
            let cols = edge_to_cell(ctx, j, SpaceKind::XRot);
            for (a, &r) in rows.iter().enumerate().skip(4) {
                for (b, &c) in cols.iter().enumerate() {
                    rot_local[(r, c)] = re[(a, b)];
                }
            }
        }
        rot_local.rows_mut(goff, n_g + n_gc).copy_from(&rot_cell);

        Ok(Self { cell: ctx.cell, traces, rot_traces, tgrad, potential, div, rot_full, rot_cell, tgrad_local, rot_local })
    }

    /// Divergence through integration by parts:
    /// ∫ D q = −∫ G_w · GRAD q + Σ_E ω ∫_E (w_E · n_E) q.
    pub fn div_ibp(&self, ctx: &CellContext<T>) -> DMatrix<T> {
        let polys = &ctx.polys;
        let ng = local_dim(ctx, SpaceKind::XGrad);
        let goff = cell_offset(ctx, SpaceKind::XGrad);
        let nd = ctx.k + 3;
        let grad_q = polys.amb.grad() * &ctx.p_k.coeffs;
        let gg = polys.gram_coeffs(&grad_q, &ctx.g.coeffs);
        let mut out = DMatrix::zeros(ctx.p_k.dim(), ng);
        for i in 0..ctx.p_k.dim() {
            for l in 0..ctx.g.dim() {
                out[(i, goff + l)] -= gg[(i, l)];
            }
        }
        for (j, le) in ctx.edges.iter().enumerate() {
            let n = le.polys.normal;
            for (x, &w) in le.polys.quad.points.iter().zip(&le.polys.quad.weights) {
                let q = polys.eval_coeffs(&ctx.p_k.coeffs, x);
                let phi = le.polys.values(x);
                let wn = phi.transpose() * self.traces[j].rows(0, nd) * n.x + phi.transpose() * self.traces[j].rows(nd, nd) * n.y;
                for i in 0..ctx.p_k.dim() {
                    let f = le.omega * w * q[(0, i)];
                    for c in 0..ng {
                        out[(i, c)] += f * wn[c];
                    }
                }
            }
        }
        out
    }

    /// Evaluates P_C w at `x` for cell-local dofs.
    pub fn eval_potential(&self, ctx: &CellContext<T>, dofs: &DVector<T>, x: &Vector2<T>) -> Vector2<T> {
        let c = &self.potential * dofs;
        let v = ctx.polys.eval_coeffs(&ctx.pvec_k1.coeffs, x) * c;
        Vector2::new(v[0], v[1])
    }
}

/// Local X_∇ cell components `[G | Gc]` as fields (coefficient columns of
/// P^{k+2}(C)² for each cell-local dof).
pub fn cell_fields<T: Real>(ctx: &CellContext<T>) -> (DMatrix<T>, DMatrix<T>) {
    let ng = local_dim(ctx, SpaceKind::XGrad);
    let goff = cell_offset(ctx, SpaceKind::XGrad);
    let n2 = 2 * ctx.polys.amb.n;
    let mut g = DMatrix::zeros(n2, ng);
    let mut gc = DMatrix::zeros(n2, ng);
    for l in 0..ctx.g.dim() {
        g.set_column(goff + l, &ctx.g.coeffs.column(l));
    }
    for l in 0..ctx.gc.dim() {
        gc.set_column(goff + ctx.g.dim() + l, &ctx.gc.coeffs.column(l));
    }
    (g, gc)
}
