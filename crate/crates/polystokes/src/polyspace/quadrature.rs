//! Gauss rules on edges, triangles and polygons.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::mesh::geometry;
use crate::Real;

#[derive(Clone, Debug)]
pub struct Quadrature<T: Real> {
    pub points: Vec<Vector2<T>>,
    pub weights: Vec<T>,
    pub degree: usize,
}

impl<T: Real> Quadrature<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn measure(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    pub fn integrate(&self, f: impl Fn(&Vector2<T>) -> T) -> T {
        self.points.iter().zip(&self.weights).fold(T::zero(), |a, (p, &w)| a + w * f(p))
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    // Newton in f64 then one polish step in T
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let zt = T::of(z);
        let (p, dp) = legendre_t(n, zt);
        let zt = zt - p / dp;
        let (_, dp) = legendre_t(n, zt);
        let wt = T::of(2.0) / ((T::one() - zt * zt) * dp * dp);
        x[i] = -zt;
        x[n - 1 - i] = zt;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

fn legendre_t<T: Real>(n: usize, z: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), z);
    for k in 2..=n {
        let p2 = (T::of_usize(2 * k - 1) * z * p1 - T::of_usize(k - 1) * p0) / T::of_usize(k);
        p0 = p1;
        p1 = p2;
    }
    (p1, T::of_usize(n) * (z * p1 - p0) / (z * z - T::one()))
}

/// Gauss-Legendre rule on the segment [a, b] exact to `degree`.
pub fn segment<T: Real>(a: &Vector2<T>, b: &Vector2<T>, degree: usize) -> Quadrature<T> {
    let n = (degree + 2) / 2;
    let (x, w) = gauss_legendre::<T>(n);
    let half = T::of(0.5);
    let len = (b - a).norm();
    Quadrature {
        points: x.iter().map(|&s| a + (b - a) * (half * (s + T::one()))).collect(),
        weights: w.iter().map(|&wi| wi * half * len).collect(),
        degree,
    }
}

/// Collapsed (Duffy) Gauss rule on a triangle exact to `degree`.
pub fn triangle<T: Real>(a: &Vector2<T>, b: &Vector2<T>, c: &Vector2<T>, degree: usize) -> Quadrature<T> {
    let nu = (degree + 3) / 2;
    let nv = (degree + 2) / 2;
    let (xu, wu) = gauss_legendre::<T>(nu);
    let (xv, wv) = gauss_legendre::<T>(nv);
    let half = T::of(0.5);
    let jac = geometry::cross(&(b - a), &(c - a)).abs();
    let mut q = Quadrature { points: Vec::with_capacity(nu * nv), weights: Vec::with_capacity(nu * nv), degree };
    for i in 0..nu {
        let u = half * (xu[i] + T::one());
        for j in 0..nv {
            let v = half * (xv[j] + T::one()) * (T::one() - u);
            q.points.push(a + (b - a) * u + (c - a) * v);
            q.weights.push(wu[i] * wv[j] * half * half * (T::one() - u) * jac);
        }
    }
    q
}

/// Rule on a simple polygon: fan from `center` when every fan triangle is
/// positively oriented, ear clipping otherwise.
pub fn polygon<T: Real>(pts: &[Vector2<T>], center: &Vector2<T>, degree: usize) -> Result<Quadrature<T>> {
    if !geometry::is_simple(pts) {
        return Err(Error::InvalidMesh("quadrature requested on a non-simple polygon".into()));
    }
    let n = pts.len();
    let fan_ok = (0..n).all(|i| geometry::cross(&(pts[i] - center), &(pts[(i + 1) % n] - center)) > T::zero());
    let tris: Vec<[Vector2<T>; 3]> = if fan_ok {
        (0..n).map(|i| [*center, pts[i], pts[(i + 1) % n]]).collect()
    } else {
        ear_clip(pts)
    };
    let mut q = Quadrature { points: Vec::new(), weights: Vec::new(), degree };
    for t in &tris {
        let r = triangle(&t[0], &t[1], &t[2], degree);
        q.points.extend(r.points);
        q.weights.extend(r.weights);
    }
    let area = geometry::signed_area(pts);
    let tol = T::of(1e-13).max(T::eps() * T::of(100.0));
    if ((q.measure() - area) / area).abs() > tol {
        return Err(Error::InvalidMesh("polygon quadrature does not reproduce the area".into()));
    }
    Ok(q)
}

fn ear_clip<T: Real>(pts: &[Vector2<T>]) -> Vec<[Vector2<T>; 3]> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut tris = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (p, c, nx) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, d) = (pts[p], pts[c], pts[nx]);
            if geometry::cross(&(b - a), &(d - b)) <= T::zero() {
                continue;
            }
            let tri = [a, b, d];
            let blocked = idx
                .iter()
                .filter(|&&j| j != p && j != c && j != nx)
                .any(|&j| in_triangle(&tri, &pts[j]));
            if !blocked {
                tris.push(tri);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([pts[idx[0]], pts[idx[1]], pts[idx[2]]]);
    }
    tris
}

fn in_triangle<T: Real>(t: &[Vector2<T>; 3], p: &Vector2<T>) -> bool {
    let s1 = geometry::cross(&(t[1] - t[0]), &(p - t[0]));
    let s2 = geometry::cross(&(t[2] - t[1]), &(p - t[1]));
    let s3 = geometry::cross(&(t[0] - t[2]), &(p - t[2]));
    s1 >= T::zero() && s2 >= T::zero() && s3 >= T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Vector2<f64>> {
        vec![Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0), Vector2::new(1.0, 1.0), Vector2::new(0.0, 1.0)]
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in 1..12 {
            let (x, w) = gauss_legendre::<f64>(n);
            for p in 0..2 * n {
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                assert!((s - exact).abs() < 1e-14, "n={n} p={p}");
            }
            assert!(w.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn edge_point_count() {
        let q = segment(&Vector2::<f64>::new(0.0, 0.0), &Vector2::new(2.0, 0.0), 3);
        assert_eq!(q.len(), 2);
        assert!((q.measure() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn square_monomials() {
        let s = unit_square();
        let q = polygon(&s, &Vector2::new(0.5, 0.5), 4).unwrap();
        let v = q.integrate(|p| p.x * p.x * p.y * p.y);
        assert!((v - 1.0 / 9.0).abs() < 1e-13);
        let q = polygon(&s, &Vector2::new(0.5, 0.5), 10).unwrap();
        for a in 0..=10 {
            for b in 0..=(10 - a) {
                let exact = 1.0 / ((a + 1) as f64 * (b + 1) as f64);
                let v = q.integrate(|p| p.x.powi(a) * p.y.powi(b));
                assert!(((v - exact) / exact).abs() < 1e-12, "{a} {b}");
            }
        }
        assert!(q.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn triangle_area() {
        let t = [Vector2::<f64>::new(0.0, 0.0), Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)];
        let q = triangle(&t[0], &t[1], &t[2], 5);
        assert!((q.measure() - 0.5).abs() < 1e-15);
        // ∫ x^a y^b over the reference triangle = a! b! / (a + b + 2)!
        let f = |n: u32| (1..=n).product::<u32>() as f64;
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let exact = f(a) * f(b) / f(a + b + 2);
                let v = q.integrate(|p| p.x.powi(a as i32) * p.y.powi(b as i32));
                assert!(((v - exact) / exact).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn nonconvex_polygon_uses_ear_clipping() {
        let l = vec![
            Vector2::<f64>::new(0.0, 0.0),
            Vector2::new(2.0, 0.0),
            Vector2::new(2.0, 1.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(1.0, 2.0),
            Vector2::new(0.0, 2.0),
        ];
        let q = polygon(&l, &Vector2::new(1.5, 0.5), 4).unwrap();
        assert!((q.measure() - 3.0).abs() < 1e-13);
        assert!(q.weights.iter().all(|&w| w > 0.0));
        // [0,1]x[0,2] contributes 1, [1,2]x[0,1] contributes 1.5
        let v = q.integrate(|p| p.x);
        assert!((v - 2.5).abs() < 1e-13);
    }
}
