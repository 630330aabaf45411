use nalgebra::{DVector, Vector2};
use serde::Serialize;

use super::assemble::{pressure_integral_row, Scheme};
use super::problem::{BoundaryCondition, StokesProblem};
use super::solve::Solution;
use crate::error::{Error, Result};
use crate::spaces::DofVector;
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub assembly: f64,
    pub solve: f64,
}

/// Errors of a discrete solution against the interpolated reference:
/// (‖u_h − I u‖_{1,∇,h} + ‖p_h − π p‖) / (‖I u‖_{1,∇,h} + ‖π p‖).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub h: f64,
    pub k: usize,
    pub bc: String,
    pub dofs: usize,
    pub velocity_error: f64,
    pub pressure_error: f64,
    pub error_abs: f64,
    /// NaN (serialized as null) when there is no reference.
    pub error_rel: f64,
    pub residual: f64,
    /// ‖D u_h‖_{L²} / ‖u_h‖_{1,∇,h}.
    pub divergence: f64,
    pub timings: Option<Timings>,
}

/// Interpolated reference (I u, π p); with a zero-mean pressure constraint
/// the mean of π p is removed.
pub fn reference_dofs<T: Real>(scheme: &Scheme<T>, problem: &StokesProblem<T>) -> Result<(DofVector<T>, DofVector<T>)> {
    let m = problem.reference.as_ref().ok_or(Error::InvalidArgument("problem has no reference solution".into()))?;
    let disc = &scheme.disc;
    let iu = disc.interpolate_grad(&|x: &Vector2<T>| m.u(x))?;
    let mut pp = disc.interpolate_l2(&|x: &Vector2<T>| m.p(x))?;
    if problem.bc == BoundaryCondition::Dirichlet {
        let row = pressure_integral_row(disc);
        let one = disc.interpolate_l2(&|_| T::one())?;
        let area = row.dot(&one.values);
        let mean = row.dot(&pp.values) / area;
        pp.values -= one.values * mean;
    }
    Ok((iu, pp))
}

/// Discrete H¹-like norm (‖·‖²_{sp∇} + a_h)^{1/2}.
pub fn velocity_norm<T: Real>(scheme: &Scheme<T>, mu: T, u: &DVector<T>) -> T {
    scheme.prods.h1_norm(&scheme.disc, &scheme.ops, u, mu)
}

/// Compares (u_h, p_h) with the interpolated reference of `problem`.
pub fn error_report<T: Real>(scheme: &Scheme<T>, problem: &StokesProblem<T>, u: &DofVector<T>, p: &DofVector<T>) -> Result<ErrorReport> {
    let (iu, pp) = reference_dofs(scheme, problem)?;
    let eu = velocity_norm(scheme, problem.mu, &(&u.values - &iu.values)).to_f64_lossy();
    let ep = (&p.values - &pp.values).norm().to_f64_lossy();
    let nu = velocity_norm(scheme, problem.mu, &iu.values).to_f64_lossy();
    let np = pp.values.norm().to_f64_lossy();
    let div = scheme.ops.div.mul_vec(&u.values).norm().to_f64_lossy();
    let uh = velocity_norm(scheme, problem.mu, &u.values).to_f64_lossy();
    Ok(ErrorReport {
        h: scheme.disc.mesh.h().to_f64_lossy(),
        k: scheme.disc.k,
        bc: problem.bc.name().into(),
        dofs: scheme.disc.grad.dim() + scheme.disc.l2.dim(),
        velocity_error: eu,
        pressure_error: ep,
        error_abs: eu + ep,
        error_rel: (eu + ep) / (nu + np),
        residual: 0.0,
        divergence: if uh > 0.0 { div / uh } else { div },
        timings: None,
    })
}

/// Report of a solved problem, including solver diagnostics.
pub fn solution_report<T: Real>(scheme: &Scheme<T>, problem: &StokesProblem<T>, sol: &Solution<T>, assembly_seconds: f64) -> Result<ErrorReport> {
    let mut r = if problem.reference.is_some() {
        error_report(scheme, problem, &sol.u, &sol.p)?
    } else {
        let uh = velocity_norm(scheme, problem.mu, &sol.u.values).to_f64_lossy();
        let ph = sol.p.values.norm().to_f64_lossy();
        let div = scheme.ops.div.mul_vec(&sol.u.values).norm().to_f64_lossy();
        ErrorReport {
            h: scheme.disc.mesh.h().to_f64_lossy(),
            k: scheme.disc.k,
            bc: problem.bc.name().into(),
            dofs: scheme.disc.grad.dim() + scheme.disc.l2.dim(),
            velocity_error: uh,
            pressure_error: ph,
            error_abs: uh + ph,
            error_rel: f64::NAN,
            residual: 0.0,
            divergence: if uh > 0.0 { div / uh } else { div },
            timings: None,
        }
    };
    r.residual = sol.residual;
    r.timings = Some(Timings { assembly: assembly_seconds, solve: sol.solve_seconds });
    Ok(r)
}
