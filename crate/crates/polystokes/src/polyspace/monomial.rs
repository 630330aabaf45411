//! Scaled monomials `ξ^a η^b`, `(ξ, η) = (x - x_C) / h_C`, ordered by total
//! degree and then by the power of `η`.

use nalgebra::{DMatrix, DVector, Vector2};

use crate::Real;

/// dim P^d in two variables (0 for negative degrees).
pub fn dim_p(d: i32) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

/// dim P^d on an edge.
pub fn dim_p1(d: i32) -> usize {
    if d < 0 {
        0
    } else {
        d as usize + 1
    }
}

pub fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

pub fn exponents(degree: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::with_capacity(dim_p(degree as i32));
    for d in 0..=degree {
        for b in 0..=d {
            e.push((d - b, b));
        }
    }
    e
}

/// Affine frame of a cell.
#[derive(Clone, Copy, Debug)]
pub struct Frame<T: Real> {
    pub center: Vector2<T>,
    pub scale: T,
}

impl<T: Real> Frame<T> {
    pub fn local(&self, x: &Vector2<T>) -> Vector2<T> {
        (x - self.center) / self.scale
    }
}

pub fn eval<T: Real>(degree: usize, xi: &Vector2<T>) -> DVector<T> {
    let n = dim_p(degree as i32);
    let mut v = DVector::zeros(n);
    let mut px = vec![T::one(); degree + 1];
    let mut py = vec![T::one(); degree + 1];
    for i in 1..=degree {
        px[i] = px[i - 1] * xi.x;
        py[i] = py[i - 1] * xi.y;
    }
    for (j, (a, b)) in exponents(degree).into_iter().enumerate() {
        v[j] = px[a] * py[b];
    }
    v
}

/// Linear maps on the coefficient space of P^D (scalar), in physical units.
#[derive(Clone, Debug)]
pub struct Ambient<T: Real> {
    pub degree: usize,
    pub n: usize,
    /// ∂/∂x and ∂/∂y.
    pub dx: DMatrix<T>,
    pub dy: DMatrix<T>,
    /// Multiplication by x̃ = x - x_C and ỹ (inputs must have degree < D).
    pub mx: DMatrix<T>,
    pub my: DMatrix<T>,
}

impl<T: Real> Ambient<T> {
    pub fn new(degree: usize, scale: T) -> Self {
        let n = dim_p(degree as i32);
        let mut dx = DMatrix::zeros(n, n);
        let mut dy = DMatrix::zeros(n, n);
        let mut mx = DMatrix::zeros(n, n);
        let mut my = DMatrix::zeros(n, n);
        for (j, (a, b)) in exponents(degree).into_iter().enumerate() {
            if a > 0 {
                dx[(index(a - 1, b), j)] = T::of_usize(a) / scale;
            }
            if b > 0 {
                dy[(index(a, b - 1), j)] = T::of_usize(b) / scale;
            }
            if a + b < degree {
                mx[(index(a + 1, b), j)] = scale;
                my[(index(a, b + 1), j)] = scale;
            }
        }
        Self { degree, n, dx, dy, mx, my }
    }

    /// Coefficient-space dimension of P^l (l ≤ D).
    pub fn dim(&self, l: i32) -> usize {
        dim_p(l)
    }

    /// Degree of the monomial at position `j`.
    pub fn degree_of(&self, j: usize) -> usize {
        let mut d = 0;
        while dim_p(d as i32) <= j {
            d += 1;
        }
        d
    }

    pub fn grad(&self) -> DMatrix<T> {
        stack(&[&[Some(&self.dx)], &[Some(&self.dy)]], self.n)
    }

    /// VROT q = (∂₂q, -∂₁q).
    pub fn vrot(&self) -> DMatrix<T> {
        let mdx = -&self.dx;
        stack(&[&[Some(&self.dy)], &[Some(&mdx)]], self.n)
    }

    pub fn div(&self) -> DMatrix<T> {
        stack(&[&[Some(&self.dx), Some(&self.dy)]], self.n)
    }

    /// ROT w = ∂₁w₂ - ∂₂w₁.
    pub fn rot(&self) -> DMatrix<T> {
        let mdy = -&self.dy;
        stack(&[&[Some(&mdy), Some(&self.dx)]], self.n)
    }

    /// Row-wise gradient, (∇w)_ij = ∂_j w_i, matrices stored row-major.
    pub fn tgrad(&self) -> DMatrix<T> {
        stack(
            &[
                &[Some(&self.dx), None],
                &[Some(&self.dy), None],
                &[None, Some(&self.dx)],
                &[None, Some(&self.dy)],
            ],
            self.n,
        )
    }

    /// Row-wise divergence.
    pub fn tdiv(&self) -> DMatrix<T> {
        stack(
            &[
                &[Some(&self.dx), Some(&self.dy), None, None],
                &[None, None, Some(&self.dx), Some(&self.dy)],
            ],
            self.n,
        )
    }

    pub fn trace(&self) -> DMatrix<T> {
        let id = DMatrix::identity(self.n, self.n);
        stack(&[&[Some(&id), None, None, Some(&id)]], self.n)
    }

    /// DIV^{-1}: P^{D-1} → R^{c,D}, p ↦ x̃ p / (2 + d) on each homogeneous part.
    pub fn div_inverse(&self) -> DMatrix<T> {
        let mut s = DMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            let d = self.degree_of(j);
            if d < self.degree {
                s[(j, j)] = T::one() / T::of_usize(2 + d);
            }
        }
        let (a, b) = (&self.mx * &s, &self.my * &s);
        stack(&[&[Some(&a)], &[Some(&b)]], self.n)
    }
}

/// Assembles a block matrix from `n × n` blocks (`None` = zero).
pub fn stack<T: Real>(rows: &[&[Option<&DMatrix<T>>]], n: usize) -> DMatrix<T> {
    let nr = rows.len();
    let nc = rows[0].len();
    let mut m = DMatrix::zeros(nr * n, nc * n);
    for (i, row) in rows.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            if let Some(b) = blk {
                m.view_mut((i * n, j * n), (n, n)).copy_from(*b);
            }
        }
    }
    m
}
