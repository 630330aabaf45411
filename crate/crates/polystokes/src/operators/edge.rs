//! Edge-level maps. Edge-local dof order: lower-id vertex block, higher-id
//! vertex block, edge block.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::polyspace::EdgePolys;
use crate::spaces::VrotSign;
use crate::Real;

/// Edge-local X_∇ dofs → monomial coefficients of w_E ∈ P^{k+2}(E)²
/// (x component first).
pub fn grad_trace<T: Real>(ep: &EdgePolys<T>, k: usize) -> Result<DMatrix<T>> {
    let rec = ep.reconstruction(k + 2)?;
    let nd = ep.degree + 1;
    let nm = k + 1;
    let mut t = DMatrix::zeros(2 * nd, 4 + 2 * nm);
    for c in 0..2 {
        for r in 0..nd {
            for m in 0..nm {
                t[(c * nd + r, 4 + c * nm + m)] = rec[(r, m)];
            }
            t[(c * nd + r, c)] = rec[(r, nm)];
            t[(c * nd + r, 2 + c)] = rec[(r, nm + 1)];
        }
    }
    Ok(t)
}

/// Edge-local X_rot dofs → monomial coefficients of v_E ∈ P^{k+1}(E).
pub fn rot_trace<T: Real>(ep: &EdgePolys<T>, k: usize) -> Result<DMatrix<T>> {
    let rec = ep.reconstruction(k + 1)?;
    let nd = ep.degree + 1;
    let mut t = DMatrix::zeros(nd, 6 + 2 * k + 1);
    for r in 0..nd {
        for m in 0..k {
            t[(r, 6 + m)] = rec[(r, m)];
        }
        t[(r, 0)] = rec[(r, k)];
        t[(r, 3)] = rec[(r, k + 1)];
    }
    Ok(t)
}

/// TGRAD_E w_E = w_E′ as coefficients in the orthonormal basis of P^{k+1}(E)²,
/// from edge-local X_∇ dofs.
pub fn tgrad_edge<T: Real>(ep: &EdgePolys<T>, k: usize) -> Result<DMatrix<T>> {
    let tr = grad_trace(ep, k)?;
    let nd = ep.degree + 1;
    let dm = ep.moment_map(k as i32 + 1) * ep.derivative();
    let n = k + 2;
    let mut out = DMatrix::zeros(2 * n, tr.ncols());
    for c in 0..2 {
        let blk = &dm * tr.rows(c * nd, nd);
        out.rows_mut(c * n, n).copy_from(&blk);
    }
    Ok(out)
}

/// Edge-local X_rot dofs → edge-local X_∇ dofs of ROT: vertex values are the
/// rot dofs, and π^k_E w_E = srdof·t_E − v_E′ n_E.
pub fn rot_edge<T: Real>(ep: &EdgePolys<T>, k: usize, sign: VrotSign) -> Result<DMatrix<T>> {
    let vt = rot_trace(ep, k)?;
    let nm = k + 1;
    let mut out = DMatrix::zeros(4 + 2 * nm, vt.ncols());
    // rot dofs of the two endpoints
    out[(0, 1)] = T::one();
    out[(1, 2)] = T::one();
    out[(2, 4)] = T::one();
    out[(3, 5)] = T::one();
    let dv = ep.moment_map(k as i32) * ep.derivative() * vt;
    let s = match sign {
        VrotSign::Standard => -T::one(),
        VrotSign::Flipped => T::one(),
    };
    let t = [ep.tangent.x, ep.tangent.y];
    let n = [ep.normal.x, ep.normal.y];
    for c in 0..2 {
        for i in 0..nm {
            let row = 4 + c * nm + i;
            // srdof_i sits after the k moments of the edge block
            out[(row, 6 + k + i)] += t[c];
            for j in 0..vt_cols(k) {
                out[(row, j)] += s * n[c] * dv[(i, j)];
            }
        }
    }
    Ok(out)
}

fn vt_cols(k: usize) -> usize {
    6 + 2 * k + 1
}
