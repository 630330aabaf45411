//! Planar polygon helpers.

use nalgebra::Vector2;

use crate::Real;

/// (a, b)^⊥ = (-b, a).
pub fn perp<T: Real>(v: &Vector2<T>) -> Vector2<T> {
    Vector2::new(-v.y, v.x)
}

pub fn cross<T: Real>(a: &Vector2<T>, b: &Vector2<T>) -> T {
    a.x * b.y - a.y * b.x
}

/// Shoelace area, positive for counterclockwise loops.
pub fn signed_area<T: Real>(pts: &[Vector2<T>]) -> T {
    let n = pts.len();
    let mut s = T::zero();
    for i in 0..n {
        s += cross(&pts[i], &pts[(i + 1) % n]);
    }
    s * T::of(0.5)
}

pub fn centroid<T: Real>(pts: &[Vector2<T>]) -> Vector2<T> {
    let n = pts.len();
    let origin = pts[0];
    let mut c = Vector2::zeros();
    let mut a = T::zero();
    for i in 0..n {
        let p = pts[i] - origin;
        let q = pts[(i + 1) % n] - origin;
        let w = cross(&p, &q);
        a += w;
        c += (p + q) * w;
    }
    if a == T::zero() {
        let mut m = Vector2::zeros();
        for p in pts {
            m += p;
        }
        return m / T::of_usize(n);
    }
    origin + c / (T::of(3.0) * a)
}

pub fn diameter<T: Real>(pts: &[Vector2<T>]) -> T {
    let mut d = T::zero();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

pub fn segment_distance<T: Real>(p: &Vector2<T>, a: &Vector2<T>, b: &Vector2<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let s = if len2 > T::zero() {
        ((p - a).dot(&ab) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    (p - (a + ab * s)).norm()
}

/// Even-odd point-in-polygon test (points on the boundary may go either way).
pub fn contains<T: Real>(pts: &[Vector2<T>], p: &Vector2<T>) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the polygon boundary, or `None` if `p` is outside.
pub fn clearance<T: Real>(pts: &[Vector2<T>], p: &Vector2<T>) -> Option<T> {
    if !contains(pts, p) {
        return None;
    }
    let n = pts.len();
    let mut d = T::max_value().unwrap();
    for i in 0..n {
        d = d.min(segment_distance(p, &pts[i], &pts[(i + 1) % n]));
    }
    Some(d)
}

/// Interior point with (approximately) maximal clearance and that clearance.
///
/// Starts from the centroid, then two levels of grid search. The centroid is
/// kept unless the grid improves the clearance by a relative margin.
pub fn chebyshev_center<T: Real>(pts: &[Vector2<T>]) -> (Vector2<T>, T) {
    const GRID: usize = 20;
    let c0 = centroid(pts);
    let r0 = clearance(pts, &c0).unwrap_or(T::zero());
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Vector2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vector2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let mut best = (c0, r0);
    let mut grid_best = (c0, -T::one());
    let (mut a, mut b) = (lo, hi);
    for _level in 0..2 {
        let step = (b - a) / T::of_usize(GRID);
        for i in 0..=GRID {
            for j in 0..=GRID {
                let p = Vector2::new(
                    a.x + step.x * T::of_usize(i),
                    a.y + step.y * T::of_usize(j),
                );
                if let Some(r) = clearance(pts, &p) {
                    if r > grid_best.1 {
                        grid_best = (p, r);
                    }
                }
            }
        }
        a = grid_best.0 - step;
        b = grid_best.0 + step;
    }
    let h = diameter(pts);
    if grid_best.1 > best.1 + T::of(1e-9) * h {
        best = grid_best;
    }
    best
}

/// True if the polygon has no self-intersections between non-adjacent edges.
pub fn is_simple<T: Real>(pts: &[Vector2<T>]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if (b - a).norm() == T::zero() {
            return false;
        }
        for j in i + 1..n {
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(&a, &b, &c, &d) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect<T: Real>(a: &Vector2<T>, b: &Vector2<T>, c: &Vector2<T>, d: &Vector2<T>) -> bool {
    let o1 = cross(&(b - a), &(c - a));
    let o2 = cross(&(b - a), &(d - a));
    let o3 = cross(&(d - c), &(a - c));
    let o4 = cross(&(d - c), &(b - c));
    let z = T::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    let on = |p: &Vector2<T>, q: &Vector2<T>, r: &Vector2<T>, o: T| {
        o == z && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Convexity of a counterclockwise loop; collinear vertices are tolerated.
pub fn is_convex<T: Real>(pts: &[Vector2<T>]) -> bool {
    let n = pts.len();
    let h = diameter(pts);
    let tol = T::of(1e-12) * h * h;
    (0..n).all(|i| {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        cross(&(b - a), &(c - b)) >= -tol
    })
}
