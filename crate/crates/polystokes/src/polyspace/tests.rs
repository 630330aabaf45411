use nalgebra::{DMatrix, DVector, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cell::{hstack, CellPolys};
use super::*;
use crate::mesh::{generate_cartesian, generate_hexagonal, Mesh};

/// Single-cell mesh on a random convex polygon.
pub(crate) fn random_convex_cell(seed: u64) -> Mesh<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..8);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // reject near-duplicate angles
    for i in 0..n {
        let next = if i + 1 < n { angles[i + 1] } else { angles[0] + std::f64::consts::TAU };
        if next - angles[i] < 0.3 {
            return random_convex_cell(seed + 1000);
        }
    }
    let (a, b) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
    let c = Vector2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let verts = angles.iter().map(|t| c + Vector2::new(a * t.cos(), b * t.sin())).collect();
    Mesh::from_cells(verts, vec![(0..n).collect()]).unwrap()
}

fn polys(m: &Mesh<f64>, d: usize) -> CellPolys<f64> {
    CellPolys::new(m, 0, d, 2 * d + 4).unwrap()
}

fn tol() -> f64 {
    1e-9
}

#[test]
fn dimension_formulas_on_random_cells() {
    for seed in 0..10 {
        let m = random_convex_cell(seed);
        let p = polys(&m, 6);
        for k in 0..=4i32 {
            for tag in [SpaceTag::G(k), SpaceTag::Gc(k), SpaceTag::R(k), SpaceTag::Rc(k)] {
                assert_eq!(p.koszul_basis(tag).unwrap().dim(), tag.dim(), "{tag:?}");
            }
            assert_eq!(p.monomial_basis(k).unwrap().dim(), SpaceTag::P(k).dim());
            assert_eq!(p.p0_basis(k).unwrap().dim(), SpaceTag::P0(k).dim());
            assert_eq!(p.rbc_basis(k).unwrap().dim(), SpaceTag::RbC(k).dim());
            assert_eq!(p.rb_basis(k).unwrap().dim(), SpaceTag::Rb(k).dim());
            if k >= 1 {
                assert_eq!(p.rtb_basis(k).unwrap().basis.dim(), SpaceTag::RTb(k).dim());
            }
        }
    }
}

#[test]
fn monomial_basis_is_orthonormal() {
    let m = random_convex_cell(3);
    let p = polys(&m, 4);
    let b = p.monomial_basis(2).unwrap();
    assert_eq!(b.dim(), 6);
    assert!((p.gram(&b, &b) - DMatrix::identity(6, 6)).norm() < 1e-10);
}

#[test]
fn decompositions_by_rank() {
    for seed in [1, 5, 9] {
        let m = random_convex_cell(seed);
        let p = polys(&m, 5);
        for k in 0..=4i32 {
            let full = 2 * SpaceTag::P(k).dim();
            let g = p.koszul_basis(SpaceTag::G(k)).unwrap();
            let gc = p.koszul_basis(SpaceTag::Gc(k)).unwrap();
            assert_eq!(rank(&hstack(&[&g.coeffs, &gc.coeffs]), 1e-10), full);
            let r = p.koszul_basis(SpaceTag::R(k)).unwrap();
            let rc = p.koszul_basis(SpaceTag::Rc(k)).unwrap();
            assert_eq!(rank(&hstack(&[&r.coeffs, &rc.coeffs]), 1e-10), full);
            // (R^{c,k})² = Rb^{c,k} ⊕ Rb^k
            let rbc = p.rbc_basis(k).unwrap();
            let rb = p.rb_basis(k).unwrap();
            assert_eq!(rank(&hstack(&[&rbc.coeffs, &rb.coeffs]), 1e-10), 2 * SpaceTag::Rc(k).dim());
            // rows of both lie in R^{c,k}
            let n = p.amb.n;
            let both = hstack(&[&rbc.coeffs, &rb.coeffs]);
            for row in 0..2 {
                let rows = both.rows(2 * n * row, 2 * n).into_owned();
                let r0 = rank(&rc.coeffs, 1e-10);
                assert_eq!(rank(&hstack(&[&rc.coeffs, &rows]), 1e-10), r0);
            }
        }
    }
}

#[test]
fn g2_with_complement_spans_p2_squared() {
    let m = generate_cartesian::<f64>(1).unwrap();
    let p = polys(&m, 3);
    let g = p.koszul_basis(SpaceTag::G(2)).unwrap();
    let gc = p.koszul_basis(SpaceTag::Gc(2)).unwrap();
    assert_eq!(rank(&hstack(&[&g.coeffs, &gc.coeffs]), 1e-10), 12);
    assert_eq!(p.koszul_basis(SpaceTag::Rc(1)).unwrap().dim(), 1);
}

#[test]
fn vrot_is_bijective_from_p0_to_r() {
    let m = random_convex_cell(2);
    let p = polys(&m, 5);
    for k in 1..=4i32 {
        let p0 = p.p0_basis(k).unwrap();
        let img = p.amb.vrot() * &p0.coeffs;
        let r = p.koszul_basis(SpaceTag::R(k - 1)).unwrap();
        assert_eq!(rank(&img, 1e-10), p0.dim());
        assert_eq!(rank(&hstack(&[&img, &r.coeffs]), 1e-10), r.dim());
    }
}

#[test]
fn rbc_is_trace_free_and_hierarchical() {
    let m = random_convex_cell(4);
    let p = polys(&m, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in 2..=4i32 {
        let b = p.rbc_basis(l).unwrap();
        let tr = p.amb.trace() * &b.coeffs;
        for _ in 0..20 {
            let x = p.frame.center + Vector2::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            let v = p.values(&x);
            assert!((v.transpose() * &tr).amax() < 1e-12);
        }
        let b1 = p.rbc_basis(l + 1).unwrap();
        assert_eq!(rank(&hstack(&[&b1.coeffs, &b.coeffs]), 1e-10), b1.dim());
    }
    assert_eq!(p.rbc_basis(3).unwrap().dim(), 3);
    assert_eq!(p.rbc_basis(1).unwrap().dim(), 0);
}

#[test]
fn inv_div_grad_identities() {
    let m = random_convex_cell(6);
    let p = polys(&m, 4);
    let n = p.amb.n;
    // q = x̃ / h in scaled coordinates: ξ
    let mut q = DVector::zeros(n);
    q[1] = 1.0;
    q[0] = -(p.mean_row() * &q)[0];
    let v = p.inv_div_grad(&q).unwrap();
    // expected [[x̃/2, ỹ/2], [0, 0]] / h
    let h = p.frame.scale;
    let mut expect = DVector::zeros(4 * n);
    expect[1] = 0.5;
    expect[n + 2] = 0.5;
    assert!((v.clone() - expect / 1.0).norm() < 1e-12 * h.max(1.0));
    let q2 = {
        let mut q = DVector::zeros(n);
        q[3] = 1.0;
        q[4] = -2.0;
        q[5] = 0.5;
        q[0] = -(p.mean_row() * &q)[0];
        q
    };
    let v2 = p.inv_div_grad(&q2).unwrap();
    let lhs = p.amb.tdiv() * v2;
    let rhs = p.amb.grad() * &q2;
    assert!((lhs - rhs).norm() < 1e-12);
    let mut bad = DVector::zeros(n);
    bad[0] = 1.0;
    assert!(p.inv_div_grad(&bad).is_err());
}

#[test]
fn div_inverse_examples() {
    let m = random_convex_cell(7);
    let p = polys(&m, 4);
    let n = p.amb.n;
    let h = p.frame.scale;
    let mut one = DVector::zeros(n);
    one[0] = 1.0;
    let v = p.div_inverse(&one);
    // x̃ / 2 = (h/2) ξ
    assert!((v[1] - h / 2.0).abs() < 1e-14 && (v[n + 2] - h / 2.0).abs() < 1e-14);
    let mut xy = DVector::zeros(n);
    xy[4] = 1.0;
    let v = p.div_inverse(&xy);
    assert!((v[7] - h / 4.0).abs() < 1e-14);
    assert!((p.amb.div() * v - xy).norm() < 1e-13);
}

#[test]
fn tdiv_isomorphisms() {
    for seed in [0, 8] {
        let m = random_convex_cell(seed);
        let p = polys(&m, 5);
        for k in 0..=3i32 {
            let rbc = p.rbc_basis(k + 1).unwrap();
            let gc = p.koszul_basis(SpaceTag::Gc(k)).unwrap();
            let img = p.amb.tdiv() * &rbc.coeffs;
            // coordinates in the orthonormal G^{c,k} basis
            let coords = p.gram_coeffs(&gc.coeffs, &img);
            assert_eq!(coords.nrows(), coords.ncols());
            assert_eq!(rank(&coords, 1e-10), gc.dim());
            assert!((&gc.coeffs * &coords - &img).norm() < 1e-10 * img.norm().max(1.0));
            let rb = p.rb_basis(k).unwrap();
            let g = p.koszul_basis(SpaceTag::G(k - 1)).unwrap();
            let img = p.amb.tdiv() * &rb.coeffs;
            assert_eq!(rank(&img, 1e-10), g.dim());
            assert_eq!(rank(&hstack(&[&img, &g.coeffs]), 1e-10), g.dim());
        }
    }
}

#[test]
fn rtb_low_degree_and_normal_traces() {
    let m = generate_hexagonal::<f64>(2).unwrap();
    for c in 0..m.n_cells() {
        let p = CellPolys::new(&m, c, 4, 10).unwrap();
        let r1 = p.rtb_basis(1).unwrap();
        assert_eq!(r1.basis.dim(), 4);
        assert_eq!(r1.parts, [0, 0, 4]);
        assert_eq!(p.rtb_basis(2).unwrap().basis.dim(), 13);
        for l in 1..=3i32 {
            let rtb = p.rtb_basis(l).unwrap();
            for (i, &e) in m.cell(c).edges.iter().enumerate() {
                let _ = i;
                let ep = EdgePolys::new(&m, e, 4, 10).unwrap();
                // fit V n_E at edge quadrature points with P^{l-1}(E) and check the residual
                let basis = ep.orthonormal(l - 1);
                for j in 0..rtb.basis.dim() {
                    let col = rtb.basis.coeffs.column(j).into_owned();
                    let col = DMatrix::from_column_slice(col.len(), 1, col.as_slice());
                    for comp in 0..2 {
                        let f = |x: &Vector2<f64>| {
                            let v = p.eval_coeffs(&col, x);
                            v[(2 * comp, 0)] * ep.normal.x + v[(2 * comp + 1, 0)] * ep.normal.y
                        };
                        let mo = ep.moments(l - 1, &ep.quad, &f);
                        let mut res = 0.0f64;
                        for x in &ep.quad.points {
                            let fit = (basis.transpose() * ep.values(x)).dot(&mo);
                            res = res.max((fit - f(x)).abs());
                        }
                        assert!(res < 1e-10, "cell {c} l {l} member {j}: {res}");
                    }
                }
            }
        }
    }
}

#[test]
fn q_identity_in_rb_plus_r() {
    let m = random_convex_cell(12);
    let p = polys(&m, 5);
    let n = p.amb.n;
    for l in 0..=3i32 {
        let rb = p.rb_basis(l).unwrap();
        let r = p.koszul_basis(SpaceTag::R(l)).unwrap();
        let nr = r.dim();
        let mut rr = DMatrix::zeros(4 * n, 2 * nr);
        rr.view_mut((0, 0), (2 * n, nr)).copy_from(&r.coeffs);
        rr.view_mut((2 * n, nr), (2 * n, nr)).copy_from(&r.coeffs);
        let space = hstack(&[&rb.coeffs, &rr]);
        for j in 0..SpaceTag::P(l).dim() {
            let mut qi = DVector::zeros(4 * n);
            qi[j] = 1.0;
            qi[3 * n + j] = 1.0;
            let g = p.gram_coeffs(&space, &space);
            let rhs = p.gram_coeffs(&space, &DMatrix::from_column_slice(4 * n, 1, qi.as_slice()));
            let c = g.cholesky().unwrap().solve(&rhs);
            let res = &space * c - DMatrix::from_column_slice(4 * n, 1, qi.as_slice());
            let err = p.gram_coeffs(&res, &res)[(0, 0)].sqrt();
            assert!(err < 1e-10, "l={l} j={j} err={err}");
        }
    }
}

#[test]
fn projection_properties() {
    let m = random_convex_cell(13);
    let p = polys(&m, 4);
    let gc = p.koszul_basis(SpaceTag::Gc(2)).unwrap();
    let member = gc.coeffs.column(1).into_owned();
    let mcol = DMatrix::from_column_slice(member.len(), 1, member.as_slice());
    let f = |x: &Vector2<f64>| {
        let v = p.eval_coeffs(&mcol, x);
        vec![v[(0, 0)], v[(1, 0)]]
    };
    let c = p.project(&gc, &p.quad, &f).unwrap();
    let mut e = DVector::zeros(gc.dim());
    e[1] = 1.0;
    assert!((c - e).norm() < 1e-11);
    let p0 = p.monomial_basis(0).unwrap();
    let ctr = p.frame.center;
    let cen = p.project(&p0, &p.quad, &|x: &Vector2<f64>| vec![x.x - ctr.x]).unwrap();
    let centroid = m.cell(0).centroid;
    // x̃ projects onto its mean, which vanishes when x_C is the centroid
    assert!((cen[0] - (centroid.x - ctr.x) * m.cell(0).area.sqrt()).abs() < 1e-11);
    // residual orthogonality
    let b = p.monomial_basis(2).unwrap();
    let g = |x: &Vector2<f64>| vec![(x.x * 3.0).sin() + x.y.exp()];
    let c = p.project(&b, &p.quad, &g).unwrap();
    let fit = &b.coeffs * &c;
    let fitm = DMatrix::from_column_slice(fit.len(), 1, fit.as_slice());
    let resid = |x: &Vector2<f64>| vec![g(x)[0] - p.eval_coeffs(&fitm, x)[(0, 0)]];
    assert!(p.moments(&b.coeffs, &p.quad, &resid).amax() < 1e-11);
}

#[test]
fn context_builds_for_all_degrees() {
    let m = generate_hexagonal::<f64>(2).unwrap();
    for k in 0..=3 {
        let ctx = build_contexts(&m, k).unwrap();
        for c in &ctx {
            assert_eq!(c.g.dim(), SpaceTag::G(k as i32 - 1).dim());
            assert_eq!(c.gc.dim(), SpaceTag::Gc(k as i32).dim());
            assert_eq!(c.rtb.basis.dim(), SpaceTag::RTb(k as i32 + 1).dim());
        }
    }
}

#[test]
fn single_precision_basis() {
    let m = generate_cartesian::<f32>(2).unwrap();
    let p = CellPolys::new(&m, 0, 3, 8).unwrap();
    let b = p.monomial_basis(2).unwrap();
    assert!((p.gram(&b, &b) - DMatrix::identity(6, 6)).norm() < 1e-4);
    let _ = tol();
}
