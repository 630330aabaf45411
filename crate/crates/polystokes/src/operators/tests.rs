use nalgebra::{Matrix2, Vector2};

use super::*;
use crate::mesh::{generate_cartesian, generate_hexagonal, perturb, Mesh};
use crate::spaces::{Discretization, Options, VrotSign};

fn meshes() -> Vec<Mesh<f64>> {
    let c = generate_cartesian::<f64>(3).unwrap();
    let h = generate_hexagonal::<f64>(3).unwrap();
    let p = perturb(&c, 0.2, 7).unwrap();
    vec![c, h, p]
}

fn max_abs(v: &nalgebra::DVector<f64>) -> f64 {
    v.amax()
}

#[test]
fn div_rot_vanishes() {
    for m in meshes() {
        for k in 0..3 {
            let d = Discretization::new(&m, k).unwrap();
            let ops = Operators::new(&d).unwrap();
            let dr = ops.div_rot().max_abs();
            let scale = ops.div.max_abs() * ops.rot.max_abs();
            assert!(dr < 1e-10 * scale, "k={k}: |D ROT| = {dr:e}");
        }
    }
}

#[test]
fn flipped_sign_breaks_the_complex() {
    let m = generate_cartesian::<f64>(2).unwrap();
    let d = Discretization::with_options(&m, 1, Options { vrot_sign: VrotSign::Flipped }).unwrap();
    let ops = Operators::new(&d).unwrap();
    assert!(ops.div_rot().max_abs() > 1e-3);
}

#[test]
fn div_matches_integration_by_parts() {
    for m in meshes() {
        for k in 0..3 {
            let d = Discretization::new(&m, k).unwrap();
            let ops = Operators::new(&d).unwrap();
            for (ctx, lo) in d.contexts.iter().zip(&ops.local) {
                let diff = (&lo.div - lo.div_ibp(ctx)).amax();
                assert!(diff < 1e-10 * (1.0 + lo.div.amax()), "k={k}, cell {}: {diff:e}", ctx.cell);
            }
        }
    }
}

fn poly_field(k: usize) -> impl Fn(&Vector2<f64>) -> Vector2<f64> + Sync {
    let p = (k + 1) as i32;
    move |x: &Vector2<f64>| Vector2::new(x.x.powi(p) + 0.5 * x.y - 0.3, x.x * x.y.powi(p.max(1) - 1) - x.y.powi(p))
}

fn poly_jacobian(k: usize) -> impl Fn(&Vector2<f64>) -> Matrix2<f64> + Sync {
    let p = (k + 1) as i32;
    move |x: &Vector2<f64>| {
        let q = p.max(1) - 1;
        let dyy = if q == 0 { 0.0 } else { q as f64 * x.x * x.y.powi(q - 1) };
        Matrix2::new(
            p as f64 * x.x.powi(p - 1),
            0.5,
            x.y.powi(q),
            dyy - p as f64 * x.y.powi(p - 1),
        )
    }
}

#[test]
fn potential_and_gradient_reproduce_polynomials() {
    for m in meshes() {
        for k in 0..3 {
            let d = Discretization::new(&m, k).unwrap();
            let ops = Operators::new(&d).unwrap();
            let w = poly_field(k);
            let jw = poly_jacobian(k);
            let iw = d.interpolate_grad(&w).unwrap();
            let ij = d.interpolate_l2mat(&jw).unwrap();
            let tg = ops.tgrad.mul_vec(&iw.values);
            let err = max_abs(&(tg - &ij.values));
            assert!(err < 1e-10, "k={k}: TGRAD I w - I ∇w = {err:e}");
            for (c, (ctx, lo)) in d.contexts.iter().zip(&ops.local).enumerate() {
                let dofs = iw.restrict(&d.grad, &d.mesh, c);
                for x in d.mesh.cell_points(c) {
                    let p = lo.eval_potential(ctx, &dofs, &x);
                    assert!((p - w(&x)).norm() < 1e-10, "k={k}, cell {c}");
                }
            }
        }
    }
}

#[test]
fn commutation_with_smooth_functions() {
    let v = |x: &Vector2<f64>| x.x.sin() * x.y.cos();
    let gv = |x: &Vector2<f64>| Vector2::new(x.x.cos() * x.y.cos(), -x.x.sin() * x.y.sin());
    let vrot = |x: &Vector2<f64>| {
        let g = gv(x);
        Vector2::new(g.y, -g.x)
    };
    let w = |x: &Vector2<f64>| Vector2::new(x.x.sin() * x.y.cos(), (x.x * x.y).exp());
    let divw = |x: &Vector2<f64>| x.x.cos() * x.y.cos() + x.x * (x.x * x.y).exp();
    for m in meshes() {
        for k in 0..3 {
            let d = Discretization::new(&m, k).unwrap();
            let ops = Operators::new(&d).unwrap();
            let iv = d.interpolate_rot(&v, &gv).unwrap();
            let lhs = ops.rot.mul_vec(&iv.values);
            let rhs = d.interpolate_grad(&vrot).unwrap();
            let err = max_abs(&(lhs - &rhs.values));
            assert!(err < 1e-10, "k={k}: ROT I v - I VROT v = {err:e}");

            let iw = d.interpolate_grad(&w).unwrap();
            let lhs = ops.div.mul_vec(&iw.values);
            let rhs = d.interpolate_l2(&divw).unwrap();
            let err = max_abs(&(lhs - &rhs.values));
            assert!(err < 1e-10, "k={k}: D I w - π div w = {err:e}");
        }
    }
}

#[test]
fn local_rot_agrees_with_global() {
    let m = generate_hexagonal::<f64>(2).unwrap();
    let d = Discretization::new(&m, 1).unwrap();
    let ops = Operators::new(&d).unwrap();
    let dense = ops.rot.to_dense();
    for (c, lo) in ops.local.iter().enumerate() {
        let rows = d.grad.local_dofs(&d.mesh, c);
        let cols = d.rot.local_dofs(&d.mesh, c);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &cc) in cols.iter().enumerate() {
                assert!((lo.rot_local[(i, j)] - dense[(r, cc)]).abs() < 1e-13);
            }
        }
    }
}
