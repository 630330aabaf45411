//! Interpolators onto the discrete spaces.

use nalgebra::{Matrix2, Vector2};

use super::discretization::Discretization;
use super::dofvector::DofVector;
use crate::error::Result;
use crate::Real;

pub type ScalarFn<'a, T> = &'a (dyn Fn(&Vector2<T>) -> T + Sync);
pub type VectorFn<'a, T> = &'a (dyn Fn(&Vector2<T>) -> Vector2<T> + Sync);
pub type MatrixFn<'a, T> = &'a (dyn Fn(&Vector2<T>) -> Matrix2<T> + Sync);

impl<T: Real> Discretization<T> {
    /// Vertex: value and VROT v; edge: π^{k-1}_E v and π^k_E(VROT v · t_E);
    /// cell: π^{k-1}_C v.
    pub fn interpolate_rot(&self, v: ScalarFn<T>, grad: VectorFn<T>) -> Result<DofVector<T>> {
        let k = self.k as i32;
        let mut out = DofVector::zeros(&self.rot);
        let vrot = |x: &Vector2<T>| {
            let g = grad(x);
            Vector2::new(g.y, -g.x)
        };
        for (i, x) in self.mesh.vertices().iter().enumerate() {
            let r = self.rot.vertex(i).start;
            let w = vrot(x);
            out.values[r] = v(x);
            out.values[r + 1] = w.x;
            out.values[r + 2] = w.y;
        }
        for (e, ep) in self.edges.iter().enumerate() {
            let q = self.edge_rhs_quadrature(e);
            let m = ep.moments(k - 1, &q, &|x| v(x));
            let t = ep.tangent;
            let s = ep.moments(k, &q, &|x| vrot(x).dot(&t));
            let r = self.rot.edge(e).start;
            out.values.rows_mut(r, m.len()).copy_from(&m);
            out.values.rows_mut(r + m.len(), s.len()).copy_from(&s);
        }
        for (c, ctx) in self.contexts.iter().enumerate() {
            let q = self.cell_rhs_quadrature(c)?;
            let p = ctx.polys.project(&ctx.p_km1, &q, &|x| vec![v(x)])?;
            out.values.rows_mut(self.rot.cell(c).start, p.len()).copy_from(&p);
        }
        Ok(out)
    }

    /// Vertex: w(x_V); edge: π^k_E w; cell: π_{G^{k-1}} w and π_{G^{c,k}} w.
    pub fn interpolate_grad(&self, w: VectorFn<T>) -> Result<DofVector<T>> {
        let k = self.k as i32;
        let mut out = DofVector::zeros(&self.grad);
        for (i, x) in self.mesh.vertices().iter().enumerate() {
            let r = self.grad.vertex(i).start;
            let val = w(x);
            out.values[r] = val.x;
            out.values[r + 1] = val.y;
        }
        for (e, ep) in self.edges.iter().enumerate() {
            let q = self.edge_rhs_quadrature(e);
            let r = self.grad.edge(e).start;
            let n = self.k + 1;
            let mx = ep.moments(k, &q, &|x| w(x).x);
            let my = ep.moments(k, &q, &|x| w(x).y);
            out.values.rows_mut(r, n).copy_from(&mx);
            out.values.rows_mut(r + n, n).copy_from(&my);
        }
        for (c, ctx) in self.contexts.iter().enumerate() {
            let q = self.cell_rhs_quadrature(c)?;
            let f = |x: &Vector2<T>| {
                let v = w(x);
                vec![v.x, v.y]
            };
            let g = ctx.polys.project(&ctx.g, &q, &f)?;
            let gc = ctx.polys.project(&ctx.gc, &q, &f)?;
            let r = self.grad.cell(c).start;
            out.values.rows_mut(r, g.len()).copy_from(&g);
            out.values.rows_mut(r + g.len(), gc.len()).copy_from(&gc);
        }
        Ok(out)
    }

    /// Edge: π^{k+1}_E(W t_E); cell: L² projection onto RTb^{k+1}(C).
    pub fn interpolate_l2mat(&self, big_w: MatrixFn<T>) -> Result<DofVector<T>> {
        let k = self.k as i32;
        let mut out = DofVector::zeros(&self.l2mat);
        for (e, ep) in self.edges.iter().enumerate() {
            let q = self.edge_rhs_quadrature(e);
            let t = ep.tangent;
            let n = self.k + 2;
            let r = self.l2mat.edge(e).start;
            let mx = ep.moments(k + 1, &q, &|x| (big_w(x) * t).x);
            let my = ep.moments(k + 1, &q, &|x| (big_w(x) * t).y);
            out.values.rows_mut(r, n).copy_from(&mx);
            out.values.rows_mut(r + n, n).copy_from(&my);
        }
        for (c, ctx) in self.contexts.iter().enumerate() {
            let q = self.cell_rhs_quadrature(c)?;
            let f = |x: &Vector2<T>| {
                let m = big_w(x);
                vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
            };
            let p = ctx.polys.project(&ctx.rtb.basis, &q, &f)?;
            out.values.rows_mut(self.l2mat.cell(c).start, p.len()).copy_from(&p);
        }
        Ok(out)
    }

    /// Cell-wise L² projection onto P^k(C).
    pub fn interpolate_l2(&self, q: ScalarFn<T>) -> Result<DofVector<T>> {
        let mut out = DofVector::zeros(&self.l2);
        for (c, ctx) in self.contexts.iter().enumerate() {
            let quad = self.cell_rhs_quadrature(c)?;
            let p = ctx.polys.project(&ctx.p_k, &quad, &|x| vec![q(x)])?;
            out.values.rows_mut(self.l2.cell(c).start, p.len()).copy_from(&p);
        }
        Ok(out)
    }
}
