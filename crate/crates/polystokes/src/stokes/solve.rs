use std::time::Instant;

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use nalgebra::DVector;

use super::assemble::SaddleSystem;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::spaces::{Discretization, DofVector};
use crate::Real;

/// Discrete velocity and pressure with solver diagnostics.
#[derive(Clone, Debug)]
pub struct Solution<T: Real> {
    pub u: DofVector<T>,
    pub p: DofVector<T>,
    pub multipliers: Vec<f64>,
    /// ‖Ax − b‖ / ‖b‖ (absolute when b = 0).
    pub residual: f64,
    pub refinement_steps: usize,
    pub solve_seconds: f64,
}

const MAX_REFINEMENT: usize = 3;

fn to_faer<T: Real>(m: &SparseMatrix<T>) -> Result<SparseColMat<usize, f64>> {
    let mut trips = Vec::with_capacity(m.nnz());
    for r in 0..m.nrows {
        for (c, v) in m.row(r) {
            trips.push(Triplet::new(r, c, v.to_f64_lossy()));
        }
    }
    SparseColMat::try_new_from_triplets(m.nrows, m.ncols, &trips).map_err(|e| Error::SingularSystem(format!("{e:?}")))
}

fn residual(a: &SparseMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    b - a.mul_vec(x)
}

/// Sparse LU with partial pivoting in double precision, followed by a few
/// steps of iterative refinement.
pub fn solve_sparse<T: Real>(m: &SparseMatrix<T>, b: &DVector<T>) -> Result<(DVector<f64>, f64, usize)> {
    let a64 = SparseMatrix {
        nrows: m.nrows,
        ncols: m.ncols,
        row_ptr: m.row_ptr.clone(),
        col_idx: m.col_idx.clone(),
        values: m.values.iter().map(|v| v.to_f64_lossy()).collect(),
    };
    let b64 = b.map(|v| v.to_f64_lossy());
    if m.nrows == 0 {
        return Ok((b64, 0.0, 0));
    }
    let lu = to_faer(m)?.sp_lu().map_err(|e| Error::SingularSystem(format!("{e:?}")))?;
    let apply = |r: &DVector<f64>| -> DVector<f64> {
        let rhs = Mat::from_fn(r.len(), 1, |i, _| r[i]);
        let s = lu.solve(&rhs);
        DVector::from_fn(r.len(), |i, _| s[(i, 0)])
    };
    let bn = b64.norm();
    let scale = if bn > 0.0 { bn } else { 1.0 };
    let mut x = apply(&b64);
    let mut res = residual(&a64, &x, &b64).norm() / scale;
    let mut steps = 0;
    while steps < MAX_REFINEMENT && res > 1e-14 && res.is_finite() {
        let dx = apply(&residual(&a64, &x, &b64));
        let cand = &x + dx;
        let r = residual(&a64, &cand, &b64).norm() / scale;
        if !(r < res) {
            break;
        }
        x = cand;
        res = r;
        steps += 1;
    }
    if !res.is_finite() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem("factorization produced non-finite values".into()));
    }
    Ok((x, res, steps))
}

pub fn solve<T: Real>(disc: &Discretization<T>, system: &SaddleSystem<T>) -> Result<Solution<T>> {
    let start = Instant::now();
    let (x, residual, steps) = solve_sparse(&system.matrix, &system.rhs)?;
    if residual > 1e-6 {
        return Err(Error::SingularSystem(format!("relative residual {residual:e} after refinement")));
    }
    let nf = system.n_free();
    let mut u = DofVector::zeros(&disc.grad);
    for (r, &g) in system.free.iter().enumerate() {
        u.values[g] = T::of(x[r]);
    }
    let mut p = DofVector::zeros(&disc.l2);
    for q in 0..system.n_pressure {
        p.values[q] = T::of(x[nf + q]);
    }
    let multipliers = x.rows(nf + system.n_pressure, system.n_multipliers).iter().copied().collect();
    Ok(Solution { u, p, multipliers, residual, refinement_steps: steps, solve_seconds: start.elapsed().as_secs_f64() })
}
