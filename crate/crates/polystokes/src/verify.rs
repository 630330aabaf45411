//! Property suite of the discrete complex: complex and exactness, commutation,
//! polynomial reproduction, product consistency, plus spectral monitors.

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::dense_rank;
use crate::mesh::Mesh;
use crate::products::{inverse_inequality_monitor, norm_equivalence_monitor, poincare_monitor, EquivalenceRange};
use crate::spaces::{MatrixFn, Options, VectorFn};
use crate::stokes::Scheme;

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured quantity (an error, or a count mismatch).
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: value <= tolerance, value, tolerance, detail: None }
    }

    fn exact(name: &str, got: usize, want: usize) -> Self {
        Self {
            name: name.into(),
            passed: got == want,
            value: (got as f64 - want as f64).abs(),
            tolerance: 0.0,
            detail: Some(format!("{got} (expected {want})")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Monitors {
    pub inverse_inequality: f64,
    pub norm_equivalence: EquivalenceRange,
    /// Only computed when the velocity space is small enough.
    pub poincare: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub k: usize,
    pub cells: usize,
    pub checks: Vec<Check>,
    pub monitors: Monitors,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Tolerances of the suite.
pub mod tol {
    pub const COMPLEX: f64 = 1e-10;
    pub const COMMUTATION: f64 = 1e-10;
    pub const REPRODUCTION: f64 = 1e-10;
    pub const DIVERGENCE_IBP: f64 = 1e-12;
    pub const SYMMETRY: f64 = 1e-12;
    pub const STABILIZATION: f64 = 1e-11;
    /// Relative singular-value threshold for numerical ranks.
    pub const RANK: f64 = 1e-8;
    /// Largest X_∇ dimension for dense rank and Poincaré computations.
    pub const DENSE_DOFS: usize = 2000;
    pub const RANDOM_SAMPLES: usize = 20;
}

/// max |ROT I v − I VROT v|, max |TGRAD I w − I TGRAD w|, max |D I w − π div w|
/// for v = sin x cos y and w = (sin x, cos y).
pub fn commutation_errors(scheme: &Scheme<f64>) -> Result<[f64; 3]> {
    let d = &scheme.disc;
    let v = |x: &Vector2<f64>| x.x.sin() * x.y.cos();
    let gv = |x: &Vector2<f64>| Vector2::new(x.x.cos() * x.y.cos(), -x.x.sin() * x.y.sin());
    let vrot = |x: &Vector2<f64>| Vector2::new(-x.x.sin() * x.y.sin(), -x.x.cos() * x.y.cos());
    let w = |x: &Vector2<f64>| Vector2::new(x.x.sin(), x.y.cos());
    let jw = |x: &Vector2<f64>| Matrix2::new(x.x.cos(), 0.0, 0.0, -x.y.sin());
    let divw = |x: &Vector2<f64>| x.x.cos() - x.y.sin();

    let iv = d.interpolate_rot(&v, &gv)?;
    let e_rot = (scheme.ops.rot.mul_vec(&iv.values) - d.interpolate_grad(&vrot)?.values).amax();
    let iw = d.interpolate_grad(&w)?;
    let e_grad = (scheme.ops.tgrad.mul_vec(&iw.values) - d.interpolate_l2mat(&jw)?.values).amax();
    let e_div = (scheme.ops.div.mul_vec(&iw.values) - d.interpolate_l2(&divw)?.values).amax();
    Ok([e_rot, e_grad, e_div])
}

/// Random vector polynomial of degree `deg` in coordinates centred at `c`.
fn random_poly(rng: &mut ChaCha8Rng, deg: usize, c: Vector2<f64>) -> impl Fn(&Vector2<f64>) -> (Vector2<f64>, Matrix2<f64>) + Sync {
    let terms: Vec<(i32, i32, f64, f64)> = (0..=deg)
        .flat_map(|d| (0..=d).map(move |b| ((d - b) as i32, b as i32)))
        .map(|(a, b)| (a, b, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    move |x: &Vector2<f64>| {
        let y = x - c;
        let mut val = Vector2::zeros();
        let mut jac = Matrix2::zeros();
        for &(a, b, cx, cy) in &terms {
            let m = y.x.powi(a) * y.y.powi(b);
            let mx = if a > 0 { a as f64 * y.x.powi(a - 1) * y.y.powi(b) } else { 0.0 };
            let my = if b > 0 { b as f64 * y.x.powi(a) * y.y.powi(b - 1) } else { 0.0 };
            val += Vector2::new(cx, cy) * m;
            jac += Matrix2::new(cx * mx, cx * my, cy * mx, cy * my);
        }
        (val, jac)
    }
}

/// Worst errors of P_C(I w) − w (pointwise at cell vertices) and
/// TGRAD(I w) − I_L²mat(TGRAD w) over random w ∈ P^{k+1}(Ω)².
pub fn reproduction_errors(scheme: &Scheme<f64>, samples: usize, seed: u64) -> Result<[f64; 2]> {
    let d = &scheme.disc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = d.mesh.n_vertices() as f64;
    let c = d.mesh.vertices().iter().fold(Vector2::zeros(), |a, v| a + v) / n;
    let (mut e_pot, mut e_grad) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random_poly(&mut rng, d.k + 1, c);
        let iw = d.interpolate_grad(&|x| f(x).0)?;
        let ij = d.interpolate_l2mat(&|x| f(x).1)?;
        e_grad = e_grad.max((scheme.ops.tgrad.mul_vec(&iw.values) - ij.values).amax());
        for (cell, (ctx, lo)) in d.contexts.iter().zip(&scheme.ops.local).enumerate() {
            let dofs = iw.restrict(&d.grad, &d.mesh, cell);
            let mut pts = d.mesh.cell_points(cell);
            pts.push(ctx.polys.frame.center);
            for x in pts {
                e_pot = e_pot.max((lo.eval_potential(ctx, &dofs, &x) - f(&x).0).norm());
            }
        }
    }
    Ok([e_pot, e_grad])
}

/// ‖P(I w) − w‖ over the domain, with P the cellwise potential.
pub fn potential_error(scheme: &Scheme<f64>, w: VectorFn<f64>) -> Result<f64> {
    let d = &scheme.disc;
    let iw = d.interpolate_grad(w)?;
    let mut sum = 0.0;
    for (cell, (ctx, lo)) in d.contexts.iter().zip(&scheme.ops.local).enumerate() {
        let dofs = iw.restrict(&d.grad, &d.mesh, cell);
        let q = d.cell_rhs_quadrature(cell)?;
        sum += q.integrate(|x| (lo.eval_potential(ctx, &dofs, x) - w(x)).norm_squared());
    }
    Ok(sum.sqrt())
}

/// st_L²mat(I W, I W)^{1/2}, the stabilization seminorm of an interpolated
/// matrix field (typically W = ∇w).
pub fn stabilization_seminorm(scheme: &Scheme<f64>, big_w: MatrixFn<f64>) -> Result<f64> {
    let d = &scheme.disc;
    let iw = d.interpolate_l2mat(big_w)?;
    let st = scheme.prods.l2mat_stab_matrix(d).form(&iw.values, &iw.values);
    Ok(st.max(0.0).sqrt())
}

/// Runs the whole suite on one mesh and degree.
pub fn verify(mesh: &Mesh<f64>, k: usize, options: Options) -> Result<VerifyReport> {
    let scheme = Scheme::with_options(mesh, k, options)?;
    let d = &scheme.disc;
    let ops = &scheme.ops;
    let mut checks = Vec::new();

    checks.push(Check::below("complex: max |D ROT|", ops.div_rot().max_abs(), tol::COMPLEX));

    if d.grad.dim() <= tol::DENSE_DOFS {
        let (rank_rot, _) = dense_rank(&ops.rot.to_dense(), tol::RANK);
        let (rank_div, _) = dense_rank(&ops.div.to_dense(), tol::RANK);
        checks.push(Check::exact("exactness: dim Ker ROT", d.rot.dim() - rank_rot, 1));
        checks.push(Check::exact("exactness: rank D", rank_div, d.l2.dim()));
        checks.push(Check::exact("exactness: rank ROT = dim Ker D", rank_rot, d.grad.dim() - rank_div));
    }

    let [e_rot, e_grad, e_div] = commutation_errors(&scheme)?;
    checks.push(Check::below("commutation: ROT I = I VROT", e_rot, tol::COMMUTATION));
    checks.push(Check::below("commutation: TGRAD I = I TGRAD", e_grad, tol::COMMUTATION));
    checks.push(Check::below("commutation: D I = π div", e_div, tol::COMMUTATION));

    let [e_pot, e_tg] = reproduction_errors(&scheme, tol::RANDOM_SAMPLES, 1 + k as u64)?;
    checks.push(Check::below("reproduction: P(I w) = w", e_pot, tol::REPRODUCTION));
    checks.push(Check::below("reproduction: TGRAD(I w) = TGRAD w", e_tg, tol::REPRODUCTION));

    let mut ibp = 0.0f64;
    for (ctx, lo) in d.contexts.iter().zip(&ops.local) {
        ibp = ibp.max((&lo.div - lo.div_ibp(ctx)).amax() / lo.div.amax().max(1.0));
    }
    checks.push(Check::below("divergence: trace form = integration by parts", ibp, tol::DIVERGENCE_IBP));

    let (mut asym, mut neg, mut min_grad) = (0.0f64, 0.0f64, f64::INFINITY);
    for lp in &scheme.prods.local {
        for m in [&lp.grad, &lp.l2mat, &lp.grad_stab, &lp.l2mat_stab] {
            asym = asym.max((m - m.transpose()).amax() / m.amax().max(1.0));
            let ev = SymmetricEigen::new(m.clone()).eigenvalues;
            neg = neg.max(-ev.min() / ev.max().max(1e-300));
        }
        let ev = SymmetricEigen::new(lp.grad.clone()).eigenvalues;
        min_grad = min_grad.min(ev.min() / ev.max());
    }
    checks.push(Check::below("products: symmetry", asym, tol::SYMMETRY));
    checks.push(Check::below("products: semidefinite", neg, 1e-10));
    checks.push(Check {
        name: "products: sp_grad definite".into(),
        passed: min_grad > 1e-12,
        value: min_grad,
        tolerance: 1e-12,
        detail: Some("smallest relative eigenvalue".into()),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = d.mesh.n_vertices() as f64;
    let c = d.mesh.vertices().iter().fold(Vector2::zeros(), |a, v| a + v) / n;
    let z = random_poly(&mut rng, k + 1, c);
    let iz = d.interpolate_grad(&|x| z(x).0)?;
    let st = scheme.prods.grad_stab_matrix(d).mul_vec(&iz.values).amax();
    checks.push(Check::below("stabilization: sp_grad vanishes on P^{k+1}", st, tol::STABILIZATION));

    let monitors = Monitors {
        inverse_inequality: inverse_inequality_monitor(d, ops)?,
        norm_equivalence: norm_equivalence_monitor(d, &scheme.prods)?,
        poincare: if d.grad.dim() <= tol::DENSE_DOFS { Some(poincare_monitor(d, ops, &scheme.prods)?) } else { None },
    };
    Ok(VerifyReport { k, cells: mesh.n_cells(), checks, monitors })
}
