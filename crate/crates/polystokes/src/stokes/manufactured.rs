//! Closed-form stream-function solutions on the unit square.
//!
//! With ψ = g(x) g(y) and g = (x(1 − x))^a the velocity u = (∂_y ψ, −∂_x ψ)
//! is divergence free; g is expanded as a polynomial so that every derivative
//! entering f = −μ Δu + ∇p is exact.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Real;

/// Names accepted by [`Manufactured::by_name`].
pub const SOLUTIONS: [&str; 2] = ["superbubble", "bubble-dirichlet"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manufactured {
    pub name: String,
    /// Exponent a of the bubble g = (x(1 − x))^a.
    pub power: u32,
    /// Pressure p = sin(mπx) sin(mπy).
    pub frequency: f64,
    /// Whether the natural (traction-free) condition μ ∇u n − p n = 0 holds
    /// on the whole boundary.
    pub traction_free: bool,
    g: [Vec<f64>; 4],
}

/// Coefficients of (x − x²)^a, lowest degree first.
fn bubble(a: u32) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..a {
        let mut next = vec![0.0; c.len() + 2];
        for (i, &v) in c.iter().enumerate() {
            next[i + 1] += v;
            next[i + 2] -= v;
        }
        c = next;
    }
    c
}

fn derive(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &v)| i as f64 * v).collect()
}

fn horner<T: Real>(c: &[f64], x: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &v| acc * x + T::of(v))
}

impl Manufactured {
    pub fn by_name(name: &str) -> Result<Self> {
        let (power, frequency, traction_free) = match name {
            "superbubble" => (3, 1.0, true),
            "bubble-dirichlet" => (2, 2.0, false),
            _ => return Err(Error::Unknown { what: "manufactured solution", name: name.into() }),
        };
        let g0 = bubble(power);
        let g1 = derive(&g0);
        let g2 = derive(&g1);
        let g3 = derive(&g2);
        Ok(Self { name: name.into(), power, frequency, traction_free, g: [g0, g1, g2, g3] })
    }

    /// g^{(d)}(t).
    fn g<T: Real>(&self, d: usize, t: T) -> T {
        horner(&self.g[d], t)
    }

    pub fn u<T: Real>(&self, x: &Vector2<T>) -> Vector2<T> {
        Vector2::new(self.g(0, x.x) * self.g(1, x.y), -self.g(1, x.x) * self.g(0, x.y))
    }

    /// Jacobian with entry (i, j) = ∂_j u_i.
    pub fn grad_u<T: Real>(&self, x: &Vector2<T>) -> Matrix2<T> {
        let (gx, gy) = ([self.g(0, x.x), self.g(1, x.x), self.g(2, x.x)], [self.g(0, x.y), self.g(1, x.y), self.g(2, x.y)]);
        Matrix2::new(gx[1] * gy[1], gx[0] * gy[2], -gx[2] * gy[0], -gx[1] * gy[1])
    }

    pub fn laplacian_u<T: Real>(&self, x: &Vector2<T>) -> Vector2<T> {
        let gx: Vec<T> = (0..4).map(|d| self.g(d, x.x)).collect();
        let gy: Vec<T> = (0..4).map(|d| self.g(d, x.y)).collect();
        Vector2::new(gx[2] * gy[1] + gx[0] * gy[3], -(gx[3] * gy[0] + gx[1] * gy[2]))
    }

    pub fn p<T: Real>(&self, x: &Vector2<T>) -> T {
        let w = T::of(self.frequency * PI);
        (w * x.x).sin() * (w * x.y).sin()
    }

    pub fn grad_p<T: Real>(&self, x: &Vector2<T>) -> Vector2<T> {
        let w = T::of(self.frequency * PI);
        Vector2::new(w * (w * x.x).cos() * (w * x.y).sin(), w * (w * x.x).sin() * (w * x.y).cos())
    }

    /// f = −μ Δu + ∇p.
    pub fn f<T: Real>(&self, x: &Vector2<T>, mu: T) -> Vector2<T> {
        self.grad_p(x) - self.laplacian_u(x) * mu
    }

    /// ∫_Ω p over the unit square.
    pub fn pressure_mean(&self) -> f64 {
        let m = self.frequency;
        let s = (1.0 - (m * PI).cos()) / (m * PI);
        s * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bubble_expansion() {
        assert_eq!(bubble(2), vec![0.0, 0.0, 1.0, -2.0, 1.0]);
        assert_eq!(bubble(3), vec![0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(Manufactured::by_name("vortex"), Err(Error::Unknown { .. })));
    }

    fn fd_check(m: &Manufactured) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        let mu = 1.3;
        for _ in 0..100 {
            let x = Vector2::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
            let ex = Vector2::new(h, 0.0);
            let ey = Vector2::new(0.0, h);
            // centered second differences of u and first differences of p
            let lap = (m.u(&(x + ex)) + m.u(&(x - ex)) + m.u(&(x + ey)) + m.u(&(x - ey)) - m.u(&x) * 4.0) / (h * h);
            let gp = Vector2::new(m.p(&(x + ex)) - m.p(&(x - ex)), m.p(&(x + ey)) - m.p(&(x - ey))) / (2.0 * h);
            let f_fd = gp - lap * mu;
            assert!((f_fd - m.f(&x, mu)).norm() <= 1e-6 * (1.0 + f_fd.norm()) + 1e-6, "{} at {x:?}", m.name);
            let ju = m.grad_u(&x);
            let dx = (m.u(&(x + ex)) - m.u(&(x - ex))) / (2.0 * h);
            let dy = (m.u(&(x + ey)) - m.u(&(x - ey))) / (2.0 * h);
            assert!((ju.column(0) - dx).norm() < 1e-6 && (ju.column(1) - dy).norm() < 1e-6);
        }
    }

    #[test]
    fn forcing_matches_finite_differences() {
        for name in SOLUTIONS {
            fd_check(&Manufactured::by_name(name).unwrap());
        }
    }

    #[test]
    fn divergence_free_and_boundary_values() {
        let m = Manufactured::by_name("superbubble").unwrap();
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            let xi = Vector2::new(t * 0.9 + 0.05, 0.3 + 0.4 * t);
            assert!(m.grad_u(&xi).trace().abs() < 1e-14);
            for x in [Vector2::new(t, 0.0), Vector2::new(t, 1.0), Vector2::new(0.0, t), Vector2::new(1.0, t)] {
                assert!(m.u(&x).norm() <= 1e-14 && m.grad_u(&x).norm() <= 1e-14 && m.p(&x).abs() <= 1e-14);
            }
        }
        let b = Manufactured::by_name("bubble-dirichlet").unwrap();
        assert!(b.u(&Vector2::new(0.0, 0.3)).norm() <= 1e-14);
        assert!(b.grad_u(&Vector2::new(0.0, 0.3)).norm() > 1e-3);
    }

    #[test]
    fn pressure_mean_of_superbubble() {
        let m = Manufactured::by_name("superbubble").unwrap();
        assert!((m.pressure_mean() - 4.0 / (PI * PI)).abs() < 1e-15);
        assert!(Manufactured::by_name("bubble-dirichlet").unwrap().pressure_mean().abs() < 1e-15);
    }
}
