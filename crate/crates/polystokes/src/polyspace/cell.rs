//! Cell polynomial spaces: scaled monomials, Koszul complements and the
//! matrix-valued spaces hosting the discrete Jacobian.

use nalgebra::{DMatrix, DVector, RowDVector, Vector2};

use super::basis::{gram_schmidt, Basis, DomainKind, SpaceTag};
use super::monomial::{self, dim_p, Ambient, Frame};
use super::quadrature::{self, Quadrature};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::Real;

/// `RTb^l` basis with the sizes of its three summands
/// `Rb^{c,l} ⊕ Rb^{l-1} ⊕ (R^{l-1})²`, in that order.
#[derive(Clone, Debug)]
pub struct RtbBasis<T: Real> {
    pub basis: Basis<T>,
    pub parts: [usize; 3],
}

/// Scaled monomials of degree ≤ `amb.degree` on one cell with their mass matrix.
#[derive(Clone, Debug)]
pub struct CellPolys<T: Real> {
    pub cell: usize,
    pub frame: Frame<T>,
    pub amb: Ambient<T>,
    pub quad: Quadrature<T>,
    pub mass: DMatrix<T>,
    pub area: T,
}

impl<T: Real> CellPolys<T> {
    pub fn new(mesh: &Mesh<T>, cell: usize, degree: usize, quad_degree: usize) -> Result<Self> {
        let c = mesh.cell(cell);
        let frame = Frame { center: c.center, scale: c.diameter };
        let quad = quadrature::polygon(&mesh.cell_points(cell), &c.center, quad_degree.max(2 * degree))?;
        let amb = Ambient::new(degree, frame.scale);
        let mut mass = DMatrix::zeros(amb.n, amb.n);
        for (p, &w) in quad.points.iter().zip(&quad.weights) {
            let v = monomial::eval(degree, &frame.local(p));
            mass.ger(w, &v, &v, T::one());
        }
        Ok(Self { cell, frame, amb, quad, mass, area: c.area })
    }

    pub fn values(&self, x: &Vector2<T>) -> DVector<T> {
        monomial::eval(self.amb.degree, &self.frame.local(x))
    }

    /// Block-diagonal mass matrix applied to coefficient columns.
    pub fn mass_apply(&self, x: &DMatrix<T>) -> DMatrix<T> {
        let n = self.amb.n;
        let mut y = DMatrix::zeros(x.nrows(), x.ncols());
        for c in 0..x.nrows() / n {
            let blk = &self.mass * x.rows(c * n, n);
            y.rows_mut(c * n, n).copy_from(&blk);
        }
        y
    }

    /// L² Gram matrix between two coefficient sets of equal arity.
    pub fn gram_coeffs(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        a.transpose() * self.mass_apply(b)
    }

    pub fn gram(&self, a: &Basis<T>, b: &Basis<T>) -> DMatrix<T> {
        self.gram_coeffs(&a.coeffs, &b.coeffs)
    }

    /// Evaluates each component of the coefficient columns at `x`
    /// (result: components × columns).
    pub fn eval_coeffs(&self, coeffs: &DMatrix<T>, x: &Vector2<T>) -> DMatrix<T> {
        let v = self.values(x);
        let n = self.amb.n;
        let nc = coeffs.nrows() / n;
        let mut out = DMatrix::zeros(nc, coeffs.ncols());
        for c in 0..nc {
            let row = v.transpose() * coeffs.rows(c * n, n);
            out.row_mut(c).copy_from(&row);
        }
        out
    }

    fn finish(&self, tag: SpaceTag, gen: DMatrix<T>) -> Result<Basis<T>> {
        let coeffs = if gen.ncols() == 0 {
            gen
        } else {
            // orthonormalize component-wise blocks jointly
            let n = self.amb.n;
            let comps = gen.nrows() / n;
            let big = block_diag(&self.mass, comps);
            gram_schmidt(&gen, &big, self.cell, &format!("{tag:?}"))?
        };
        Ok(Basis { tag, domain: DomainKind::Cell, id: self.cell, degree: self.amb.degree, coeffs })
    }

    fn check_degree(&self, l: i32) {
        assert!(l <= self.amb.degree as i32, "degree {l} exceeds the ambient degree {}", self.amb.degree);
    }

    /// Columns selecting monomials with total degree in `lo..=hi`.
    fn monomials(&self, lo: i32, hi: i32) -> DMatrix<T> {
        let (a, b) = (dim_p(lo - 1), dim_p(hi));
        let mut m = DMatrix::zeros(self.amb.n, b.saturating_sub(a));
        for j in a..b {
            m[(j, j - a)] = T::one();
        }
        m
    }

    /// Orthonormal basis of P^l(C).
    pub fn monomial_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        self.finish(SpaceTag::P(l), self.monomials(0, l))
    }

    /// Orthonormal basis of the zero-mean subspace P^{0,l}(C).
    pub fn p0_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        let mut gen = self.monomials(1, l);
        let mean = self.mean_row();
        for j in 0..gen.ncols() {
            let mu = (&mean * gen.column(j))[0];
            gen[(0, j)] -= mu;
        }
        self.finish(SpaceTag::P0(l), gen)
    }

    /// Row vector mapping scalar coefficients to their cell mean.
    pub fn mean_row(&self) -> RowDVector<T> {
        self.mass.row(0) / self.area
    }

    pub fn pvec_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        let m = self.monomials(0, l);
        self.finish(SpaceTag::Pvec(l), block_diag(&m, 2))
    }

    pub fn pmat_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        let m = self.monomials(0, l);
        self.finish(SpaceTag::Pmat(l), block_diag(&m, 4))
    }

    /// Koszul-type spaces G^l, G^{c,l}, R^l, R^{c,l}.
    pub fn koszul_basis(&self, tag: SpaceTag) -> Result<Basis<T>> {
        let gen = match tag {
            SpaceTag::G(l) => {
                self.check_degree(l + 1);
                self.amb.grad() * self.monomials(1, l + 1)
            }
            SpaceTag::R(l) => {
                self.check_degree(l + 1);
                self.amb.vrot() * self.monomials(1, l + 1)
            }
            SpaceTag::Gc(l) => {
                self.check_degree(l);
                let m = self.monomials(0, l - 1);
                vstack(&[-(&self.amb.my * &m), &self.amb.mx * &m])
            }
            SpaceTag::Rc(l) => {
                self.check_degree(l);
                let m = self.monomials(0, l - 1);
                vstack(&[&self.amb.mx * &m, &self.amb.my * &m])
            }
            other => return Err(Error::InvalidArgument(format!("{other:?} is not a Koszul space"))),
        };
        self.finish(tag, gen)
    }

    /// Trace-free Rb^{c,l}: [[-x̃ỹQ, -ỹ²Q], [x̃²Q, x̃ỹQ]], Q ∈ P^{l-2}.
    pub fn rbc_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        let q = self.monomials(0, l - 2);
        let (mx, my) = (&self.amb.mx, &self.amb.my);
        let xy = mx * (my * &q);
        let yy = my * (my * &q);
        let xx = mx * (mx * &q);
        self.finish(SpaceTag::RbC(l), vstack(&[-&xy, -yy, xx, xy]))
    }

    /// DIV^{-1} on scalar coefficients (degree < D).
    pub fn div_inverse(&self, p: &DVector<T>) -> DVector<T> {
        self.amb.div_inverse() * p
    }

    /// Row-wise DIV^{-1} of GRAD q, for q with zero mean.
    pub fn inv_div_grad(&self, q: &DVector<T>) -> Result<DVector<T>> {
        let mean = (self.mean_row() * q)[0];
        let scale = q.amax().max(T::one());
        if mean.abs() > T::of(1e-12).max(T::eps() * T::of(100.0)) * scale {
            return Err(Error::InvalidArgument("inv_div_grad needs a zero-mean argument".into()));
        }
        Ok(self.inv_div_grad_map() * q)
    }

    /// Matrix of q ↦ InvDivGrad q (constants are mapped to zero).
    pub fn inv_div_grad_map(&self) -> DMatrix<T> {
        let di = self.amb.div_inverse();
        let n = self.amb.n;
        let gx = &di * &self.amb.dx;
        let gy = &di * &self.amb.dy;
        vstack(&[gx.rows(0, n).into_owned(), gx.rows(n, n).into_owned(), gy.rows(0, n).into_owned(), gy.rows(n, n).into_owned()])
    }

    /// Rb^l = InvDivGrad P^{0,l}.
    pub fn rb_basis(&self, l: i32) -> Result<Basis<T>> {
        self.check_degree(l);
        let gen = self.inv_div_grad_map() * self.monomials(1, l);
        self.finish(SpaceTag::Rb(l), gen)
    }

    /// RTb^l = Rb^{c,l} ⊕ Rb^{l-1} ⊕ (R^{l-1})², each summand orthonormal.
    pub fn rtb_basis(&self, l: i32) -> Result<RtbBasis<T>> {
        self.check_degree(l);
        let rbc = self.rbc_basis(l)?;
        let rb = self.rb_basis(l - 1)?;
        let r = self.koszul_basis(SpaceTag::R(l - 1))?;
        let n = self.amb.n;
        let nr = r.dim();
        let mut rr = DMatrix::zeros(4 * n, 2 * nr);
        rr.view_mut((0, 0), (2 * n, nr)).copy_from(&r.coeffs);
        rr.view_mut((2 * n, nr), (2 * n, nr)).copy_from(&r.coeffs);
        let parts = [rbc.dim(), rb.dim(), 2 * nr];
        let coeffs = hstack(&[&rbc.coeffs, &rb.coeffs, &rr]);
        Ok(RtbBasis {
            basis: Basis { tag: SpaceTag::RTb(l), domain: DomainKind::Cell, id: self.cell, degree: self.amb.degree, coeffs },
            parts,
        })
    }

    /// L² moments ∫ f·φ_i of a field sampled by `f` against basis members,
    /// using the quadrature `quad`.
    pub fn moments(&self, basis: &DMatrix<T>, quad: &Quadrature<T>, f: &dyn Fn(&Vector2<T>) -> Vec<T>) -> DVector<T> {
        let mut rhs = DVector::zeros(basis.ncols());
        for (p, &w) in quad.points.iter().zip(&quad.weights) {
            let vals = self.eval_coeffs(basis, p);
            let fv = f(p);
            for (c, &fc) in fv.iter().enumerate().take(vals.nrows()) {
                rhs.axpy(w * fc, &vals.row(c).transpose(), T::one());
            }
        }
        rhs
    }

    /// L²-orthogonal projection of `f` onto span(basis), as basis coefficients.
    pub fn project(&self, basis: &Basis<T>, quad: &Quadrature<T>, f: &dyn Fn(&Vector2<T>) -> Vec<T>) -> Result<DVector<T>> {
        let rhs = self.moments(&basis.coeffs, quad, f);
        let g = self.gram(basis, basis);
        solve_spd(g, rhs).ok_or_else(|| Error::SingularLocal { cell: self.cell, what: format!("{:?} Gram matrix", basis.tag) })
    }
}

pub fn solve_spd<T: Real>(g: DMatrix<T>, rhs: DVector<T>) -> Option<DVector<T>> {
    if g.nrows() == 0 {
        return Some(rhs);
    }
    g.cholesky().map(|c| c.solve(&rhs))
}

pub fn block_diag<T: Real>(b: &DMatrix<T>, copies: usize) -> DMatrix<T> {
    let (r, c) = b.shape();
    let mut m = DMatrix::zeros(r * copies, c * copies);
    for i in 0..copies {
        m.view_mut((i * r, i * c), (r, c)).copy_from(b);
    }
    m
}

pub fn vstack<T: Real, M: std::borrow::Borrow<DMatrix<T>>>(blocks: &[M]) -> DMatrix<T> {
    let nc = blocks[0].borrow().ncols();
    let nr: usize = blocks.iter().map(|b| b.borrow().nrows()).sum();
    let mut m = DMatrix::zeros(nr, nc);
    let mut r = 0;
    for b in blocks {
        let b = b.borrow();
        m.rows_mut(r, b.nrows()).copy_from(b);
        r += b.nrows();
    }
    m
}

pub fn hstack<T: Real>(blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let nr = blocks[0].nrows();
    let nc: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = DMatrix::zeros(nr, nc);
    let mut c = 0;
    for b in blocks {
        m.columns_mut(c, b.ncols()).copy_from(*b);
        c += b.ncols();
    }
    m
}

/// Numerical rank with threshold `rel · σ_max`.
pub fn rank<T: Real>(m: &DMatrix<T>, rel: T) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let smax = s.max();
    s.iter().filter(|&&x| x > rel * smax).count()
}
