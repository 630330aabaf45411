use nalgebra::{DMatrix, DVector};

use super::monomial::{dim_p, dim_p1};
use crate::error::{Error, Result};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Scalar,
    Vector,
    Matrix,
}

impl Arity {
    pub fn components(self) -> usize {
        match self {
            Arity::Scalar => 1,
            Arity::Vector => 2,
            Arity::Matrix => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Cell,
    Edge,
}

/// Polynomial space label; the integer is the degree (may be -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceTag {
    P(i32),
    P0(i32),
    G(i32),
    Gc(i32),
    R(i32),
    Rc(i32),
    RbC(i32),
    Rb(i32),
    RTb(i32),
    Pvec(i32),
    Pmat(i32),
}

impl SpaceTag {
    pub fn arity(self) -> Arity {
        use SpaceTag::*;
        match self {
            P(_) | P0(_) => Arity::Scalar,
            G(_) | Gc(_) | R(_) | Rc(_) | Pvec(_) => Arity::Vector,
            RbC(_) | Rb(_) | RTb(_) | Pmat(_) => Arity::Matrix,
        }
    }

    /// Analytic dimension on a cell.
    pub fn dim(self) -> usize {
        use SpaceTag::*;
        let sub1 = |n: usize| n.saturating_sub(1);
        match self {
            P(l) => dim_p(l),
            P0(l) => sub1(dim_p(l)),
            G(l) | R(l) => sub1(dim_p(l + 1)),
            Gc(l) | Rc(l) => dim_p(l - 1),
            RbC(l) => dim_p(l - 2),
            Rb(l) => sub1(dim_p(l)),
            RTb(l) => {
                if l < 1 {
                    0
                } else {
                    RbC(l).dim() + Rb(l - 1).dim() + 2 * R(l - 1).dim()
                }
            }
            Pvec(l) => 2 * dim_p(l),
            Pmat(l) => 4 * dim_p(l),
        }
    }

    /// Analytic dimension on an edge (only the full spaces make sense there).
    pub fn edge_dim(self) -> usize {
        match self {
            SpaceTag::P(l) => dim_p1(l),
            SpaceTag::Pvec(l) => 2 * dim_p1(l),
            _ => 0,
        }
    }
}

/// Members of a polynomial space, as columns of coefficients in the ambient
/// monomial basis of degree `degree` (component-major for vector and matrix
/// fields; matrices are stored row-major).
#[derive(Clone, Debug)]
pub struct Basis<T: Real> {
    pub tag: SpaceTag,
    pub domain: DomainKind,
    pub id: usize,
    pub degree: usize,
    pub coeffs: DMatrix<T>,
}

impl<T: Real> Basis<T> {
    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn arity(&self) -> Arity {
        self.tag.arity()
    }

    pub fn member(&self, i: usize) -> DVector<T> {
        self.coeffs.column(i).into_owned()
    }
}

/// Orthonormalizes the columns of `gen` for the inner product `<u, v> = uᵀ M v`
/// by modified Gram-Schmidt with one re-orthogonalization pass.
pub fn gram_schmidt<T: Real>(gen: &DMatrix<T>, mass: &DMatrix<T>, cell: usize, what: &str) -> Result<DMatrix<T>> {
    let (n, m) = gen.shape();
    let mut q = DMatrix::zeros(n, m);
    let tol = T::eps() * T::of(1e3);
    for j in 0..m {
        let mut v = gen.column(j).into_owned();
        let n0 = (v.dot(&(mass * &v))).sqrt();
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let r = qi.dot(&(mass * &v));
                v -= qi * r;
            }
        }
        let nv = (v.dot(&(mass * &v))).sqrt();
        if !(nv > tol * n0) || n0 == T::zero() {
            return Err(Error::GramBreakdown { cell, what: format!("{what}: member {j} is dependent") });
        }
        q.set_column(j, &(v / nv));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(SpaceTag::RTb(1).dim(), 4);
        assert_eq!(SpaceTag::RTb(2).dim(), 13);
        assert_eq!(SpaceTag::RbC(3).dim(), 3);
        assert_eq!(SpaceTag::Rb(1).dim(), 2);
        assert_eq!(SpaceTag::Gc(0).dim(), 0);
        assert_eq!(SpaceTag::Rc(1).dim(), 1);
        assert_eq!(SpaceTag::P(-1).dim(), 0);
        assert_eq!(SpaceTag::P(3).edge_dim(), 4);
        for l in 1..5 {
            assert_eq!(SpaceTag::RbC(l).dim() + SpaceTag::Rb(l).dim(), 2 * dim_p(l - 1));
        }
    }

    #[test]
    fn orthonormalizes() {
        let mass = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let gen = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let q = gram_schmidt(&gen, &mass, 0, "test").unwrap();
        let g = q.transpose() * &mass * &q;
        assert!((g - DMatrix::identity(2, 2)).norm() < 1e-14);
        let dep = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 1.0, 2.0]);
        assert!(matches!(gram_schmidt(&dep, &mass, 3, "x"), Err(Error::GramBreakdown { cell: 3, .. })));
    }
}
