//! Polynomials on an edge in the scaled parameter ξ = (x - x_E)·t_E / h_E ∈ [-1/2, 1/2].

use nalgebra::{DMatrix, DVector, Vector2};

use super::basis::gram_schmidt;
use super::quadrature::{self, Quadrature};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::Real;

#[derive(Clone, Debug)]
pub struct EdgePolys<T: Real> {
    pub edge: usize,
    pub midpoint: Vector2<T>,
    pub tangent: Vector2<T>,
    pub normal: Vector2<T>,
    pub length: T,
    pub degree: usize,
    pub quad: Quadrature<T>,
    pub mass: DMatrix<T>,
    /// Orthonormal basis of P^degree(E); its first l+1 columns span P^l(E).
    pub orth: DMatrix<T>,
}

impl<T: Real> EdgePolys<T> {
    pub fn new(mesh: &Mesh<T>, edge: usize, degree: usize, quad_degree: usize) -> Result<Self> {
        let e = mesh.edge(edge);
        let (a, b) = (mesh.vertex(e.vertices[0]), mesh.vertex(e.vertices[1]));
        let quad = quadrature::segment(&a, &b, quad_degree.max(2 * degree));
        let mut ep = Self {
            edge,
            midpoint: e.midpoint,
            tangent: e.tangent,
            normal: e.normal,
            length: e.length,
            degree,
            quad,
            mass: DMatrix::zeros(degree + 1, degree + 1),
            orth: DMatrix::zeros(0, 0),
        };
        let mut mass = DMatrix::zeros(degree + 1, degree + 1);
        for (p, &w) in ep.quad.points.iter().zip(&ep.quad.weights) {
            let v = ep.values(p);
            mass.ger(w, &v, &v, T::one());
        }
        ep.orth = gram_schmidt(&DMatrix::identity(degree + 1, degree + 1), &mass, edge, "edge monomials")
            .map_err(|_| Error::InvalidMesh(format!("degenerate edge {edge}")))?;
        ep.mass = mass;
        Ok(ep)
    }

    pub fn param(&self, x: &Vector2<T>) -> T {
        (x - self.midpoint).dot(&self.tangent) / self.length
    }

    pub fn values_at(&self, xi: T) -> DVector<T> {
        let mut v = DVector::zeros(self.degree + 1);
        let mut p = T::one();
        for j in 0..=self.degree {
            v[j] = p;
            p *= xi;
        }
        v
    }

    pub fn values(&self, x: &Vector2<T>) -> DVector<T> {
        self.values_at(self.param(x))
    }

    /// Arclength derivative d/ds on monomial coefficients.
    pub fn derivative(&self) -> DMatrix<T> {
        let n = self.degree + 1;
        let mut d = DMatrix::zeros(n, n);
        for j in 1..n {
            d[(j - 1, j)] = T::of_usize(j) / self.length;
        }
        d
    }

    /// Orthonormal basis of P^l(E) as monomial coefficient columns.
    pub fn orthonormal(&self, l: i32) -> DMatrix<T> {
        let m = if l < 0 { 0 } else { l as usize + 1 };
        self.orth.columns(0, m).into_owned()
    }

    /// Moments against the orthonormal basis of P^l(E) of monomial coefficients.
    pub fn moment_map(&self, l: i32) -> DMatrix<T> {
        self.orthonormal(l).transpose() * &self.mass
    }

    /// Map from (moments up to degree l-2, value at the start, value at the
    /// end) to the monomial coefficients of the unique p ∈ P^l(E).
    pub fn reconstruction(&self, l: usize) -> Result<DMatrix<T>> {
        assert!(l <= self.degree);
        let n = l + 1;
        let mut sys = DMatrix::zeros(n, n);
        let mm = self.moment_map(l as i32 - 2);
        for i in 0..mm.nrows() {
            for j in 0..n {
                sys[(i, j)] = mm[(i, j)];
            }
        }
        let va = self.values_at(T::of(-0.5));
        let vb = self.values_at(T::of(0.5));
        for j in 0..n {
            sys[(n - 2, j)] = va[j];
            sys[(n - 1, j)] = vb[j];
        }
        let inv = sys
            .try_inverse()
            .ok_or_else(|| Error::SingularLocal { cell: self.edge, what: "edge reconstruction".into() })?;
        let mut out = DMatrix::zeros(self.degree + 1, n);
        out.rows_mut(0, n).copy_from(&inv);
        Ok(out)
    }

    /// ∫_E f φ_i for the orthonormal basis of P^l(E).
    pub fn moments(&self, l: i32, quad: &Quadrature<T>, f: &dyn Fn(&Vector2<T>) -> T) -> DVector<T> {
        let b = self.orthonormal(l);
        let mut m = DVector::zeros(b.ncols());
        for (p, &w) in quad.points.iter().zip(&quad.weights) {
            let v = b.transpose() * self.values(p);
            m.axpy(w * f(p), &v, T::one());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cartesian;

    #[test]
    fn orthonormal_basis() {
        let m = generate_cartesian::<f64>(3).unwrap();
        let e = EdgePolys::new(&m, 5, 3, 8).unwrap();
        assert_eq!(e.orthonormal(3).ncols(), 4);
        let g = e.orthonormal(3).transpose() * &e.mass * e.orthonormal(3);
        assert!((g - DMatrix::identity(4, 4)).norm() < 1e-10);
        assert_eq!(e.orthonormal(-1).ncols(), 0);
    }

    #[test]
    fn reconstruction_is_unisolvent_and_exact() {
        let m = generate_cartesian::<f64>(2).unwrap();
        let e = EdgePolys::new(&m, 3, 4, 10).unwrap();
        for l in 1..=4usize {
            let r = e.reconstruction(l).unwrap();
            // p(ξ) = 1 + 2ξ - ξ^l
            let mut p = DVector::zeros(5);
            p[0] = 1.0;
            p[1] += 2.0;
            p[l] -= 1.0;
            let mut dofs = DVector::zeros(l + 1);
            dofs.rows_mut(0, l - 1).copy_from(&(e.moment_map(l as i32 - 2) * &p));
            dofs[l - 1] = e.values_at(-0.5).dot(&p);
            dofs[l] = e.values_at(0.5).dot(&p);
            assert!((r * dofs - p).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_linear() {
        let m = generate_cartesian::<f64>(2).unwrap();
        let e = EdgePolys::new(&m, 0, 2, 4).unwrap();
        let mut p = DVector::zeros(3);
        p[1] = e.length; // p = s - s_mid
        let d = e.derivative() * p;
        assert!((d[0] - 1.0).abs() < 1e-15 && d[1] == 0.0);
    }
}
