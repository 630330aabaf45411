use std::path::Path;

use anyhow::{anyhow, bail, Context};
use polystokes::mesh::regularity_report;
use polystokes::spaces::{Options, VrotSign};
use polystokes::stokes::{self, convergence_study, Manufactured, Study};
use polystokes::{Scheme, StokesProblem};
use serde_json::{json, Value};

use crate::output::{emit, json_string, with_degree_suffix};
use crate::source::{boundary_condition, family, meshes};
use crate::{svg, MeshArgs, ProblemArgs};

pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_RATE: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

/// Residual above which a solve counts as failed.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// A study passes when its final slope reaches k + RATE_SLACK.
pub const RATE_SLACK: f64 = 0.8;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: anyhow::Error) -> Self {
        Self { code, error }
    }
}

/// Numerical breakdowns map to the solver code, everything else is a
/// configuration problem.
impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        use polystokes::Error as E;
        let code = match error.downcast_ref::<E>() {
            Some(E::SingularSystem(_) | E::GramBreakdown { .. } | E::SingularLocal { .. }) => EXIT_SOLVER,
            _ => EXIT_CONFIG,
        };
        Self { code, error }
    }
}

impl From<polystokes::Error> for Failure {
    fn from(e: polystokes::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn problem(args: &ProblemArgs, mesh: &polystokes::Mesh, k: usize) -> anyhow::Result<StokesProblem> {
    let bc = boundary_condition(args, mesh)?;
    if !(args.mu > 0.0) {
        bail!("--mu must be positive");
    }
    Ok(match args.solution.as_str() {
        "zero" => StokesProblem::homogeneous(k, args.mu, bc),
        name => StokesProblem::manufactured(k, args.mu, bc, Manufactured::by_name(name)?),
    })
}

fn check_degree(k: usize) {
    if k > 3 {
        log::warn!("degree {k} is above the tested range 0..=3");
    }
}

fn report_json(r: &stokes::ErrorReport, timings: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if !timings {
        v["timings"] = Value::Null;
    }
    v
}

pub fn solve(mesh: &MeshArgs, args: &ProblemArgs, k: usize, out: Option<&Path>, save: Option<&Path>, timings: bool) -> Result<(), Failure> {
    check_degree(k);
    let mut list = meshes(mesh)?;
    if list.len() != 1 {
        return Err(Failure::new(EXIT_CONFIG, anyhow!("solve takes exactly one mesh (got {})", list.len())));
    }
    let (label, mesh) = list.remove(0);
    let problem = problem(args, &mesh, k)?;
    let scheme = Scheme::new(&mesh, k)?;
    let system = stokes::assemble(&scheme, &problem)?;
    let sol = stokes::solve(&scheme.disc, &system)?;
    let report = stokes::solution_report(&scheme, &problem, &sol, system.assembly_seconds)?;

    let mut v = report_json(&report, timings);
    v["mesh"] = json!(label);
    v["solution"] = json!(args.solution);
    v["mu"] = json!(args.mu);
    v["slopes"] = json!([]);
    v["multipliers"] = json!(sol.multipliers);
    emit(out, &json_string(&v))?;
    if let Some(base) = save {
        let name = base.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        sol.u.write_sidecar(&base.with_file_name(format!("{name}-velocity.bin")))?;
        sol.p.write_sidecar(&base.with_file_name(format!("{name}-pressure.bin")))?;
    }
    if report.residual > RESIDUAL_TOL {
        return Err(Failure::new(EXIT_SOLVER, anyhow!("relative residual {:e} exceeds {RESIDUAL_TOL:e}", report.residual)));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn converge(
    mesh: &MeshArgs,
    args: &ProblemArgs,
    degrees: &[usize],
    out: Option<&Path>,
    svg_path: Option<&Path>,
    json_path: Option<&Path>,
    timings: bool,
) -> Result<(), Failure> {
    let (fam, levels) = family(mesh)?;
    let first = fam.mesh::<f64>(levels[0], mesh.seed)?;
    let bc = boundary_condition(args, &first)?;
    if let polystokes::stokes::BoundaryCondition::Mixed(_) = bc {
        // edge ids differ between levels; only named sides carry over
        if args.gamma_d.iter().any(|t| t.trim().parse::<usize>().is_ok()) {
            return Err(Failure::new(EXIT_CONFIG, anyhow!("use side names (left, right, bottom, top) for --gamma-d in a convergence study")));
        }
    }
    Manufactured::by_name(&args.solution)?;

    let mut tables = Vec::new();
    let mut failures = Vec::new();
    for &k in degrees {
        check_degree(k);
        let study = Study { family: fam.clone(), levels: levels.clone(), k, bc: bc.clone(), solution: args.solution.clone(), mu: args.mu, seed: mesh.seed };
        let table = if matches!(bc, polystokes::stokes::BoundaryCondition::Mixed(_)) {
            // each level recomputes its own Γ_D from the side names
            convergence_mixed(&study, &|m| boundary_condition(args, m))?
        } else {
            convergence_study(&study)?
        };
        let csv = table.to_csv();
        match (out, degrees.len()) {
            (Some(p), 1) => emit(Some(p), &csv)?,
            (Some(p), _) => emit(Some(&with_degree_suffix(p, k)), &csv)?,
            (None, 1) => emit(None, &csv)?,
            (None, _) => emit(None, &format!("# k={k}\n{csv}"))?,
        }
        let slope = table.final_slope().unwrap_or(f64::NAN);
        if !(slope >= k as f64 + RATE_SLACK) {
            failures.push(format!("k={k}: final slope {slope:.3} < {:.1}", k as f64 + RATE_SLACK));
        }
        tables.push(table);
    }
    if let Some(p) = svg_path {
        let series: Vec<(usize, Vec<(f64, f64)>)> = tables.iter().map(|t| (t.k, t.rows.iter().map(|r| (r.h, r.err)).collect())).collect();
        emit(Some(p), &svg::loglog(&series))?;
    }
    if let Some(p) = json_path {
        let v: Vec<Value> = tables
            .iter()
            .map(|t| {
                json!({
                    "k": t.k,
                    "bc": t.bc,
                    "solution": t.solution,
                    "slopes": t.slopes(),
                    "levels": t.rows.iter().map(|r| report_json(&r.report, timings)).collect::<Vec<_>>(),
                })
            })
            .collect();
        emit(Some(p), &json_string(&Value::Array(v)))?;
    }
    if !failures.is_empty() {
        return Err(Failure::new(EXIT_RATE, anyhow!("convergence rate below target: {}", failures.join("; "))));
    }
    Ok(())
}

/// Convergence study whose Dirichlet edge set is rebuilt on every level.
fn convergence_mixed(
    study: &Study,
    bc_of: &dyn Fn(&polystokes::Mesh) -> anyhow::Result<polystokes::stokes::BoundaryCondition>,
) -> anyhow::Result<stokes::ConvergenceTable> {
    let m = Manufactured::by_name(&study.solution)?;
    let mut rows: Vec<stokes::ConvergenceRow> = Vec::new();
    for &level in &study.levels {
        let mesh = study.family.mesh::<f64>(level, study.seed)?;
        let bc = bc_of(&mesh)?;
        let problem = StokesProblem::manufactured(study.k, study.mu, bc, m.clone());
        let scheme = Scheme::new(&mesh, study.k)?;
        let system = stokes::assemble(&scheme, &problem)?;
        let sol = stokes::solve(&scheme.disc, &system)?;
        let report = stokes::solution_report(&scheme, &problem, &sol, system.assembly_seconds)?;
        let rate = rows.last().map(|p| stokes::slopes(&[p.h, report.h], &[p.err, report.error_rel])[0]);
        rows.push(stokes::ConvergenceRow { h: report.h, dofs: report.dofs, err: report.error_rel, rate, report });
    }
    if rows.len() < 2 {
        bail!("a convergence study needs at least two levels");
    }
    Ok(stokes::ConvergenceTable { k: study.k, bc: "mixed".into(), solution: study.solution.clone(), rows })
}

pub fn verify(mesh: &MeshArgs, degrees: &[usize], out: Option<&Path>, flip: bool) -> Result<(), Failure> {
    let options = Options { vrot_sign: if flip { VrotSign::Flipped } else { VrotSign::Standard } };
    let mut results = Vec::new();
    let mut failed = Vec::new();
    for (label, m) in meshes(mesh)? {
        for &k in degrees {
            check_degree(k);
            let r = polystokes::verify::verify(&m, k, options).with_context(|| format!("verifying {label} at k={k}"))?;
            for name in r.failed() {
                failed.push(format!("{label} k={k}: {name}"));
            }
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["mesh"] = json!(label);
            v["passed"] = json!(r.passed());
            results.push(v);
        }
    }
    emit(out, &json_string(&Value::Array(results)))?;
    if !failed.is_empty() {
        return Err(Failure::new(EXIT_VERIFY, anyhow!("failed checks:\n  {}", failed.join("\n  "))));
    }
    Ok(())
}

pub fn meshinfo(mesh: &MeshArgs, out: Option<&Path>, write_mesh: Option<&Path>) -> Result<(), Failure> {
    let list = meshes(mesh)?;
    if write_mesh.is_some() && list.len() != 1 {
        return Err(Failure::new(EXIT_CONFIG, anyhow!("--write-mesh takes exactly one mesh")));
    }
    let mut infos = Vec::new();
    for (label, m) in &list {
        infos.push(json!({
            "mesh": label,
            "vertices": m.n_vertices(),
            "edges": m.n_edges(),
            "cells": m.n_cells(),
            "boundary_edges": m.boundary_edges().len(),
            "h": m.h(),
            "regularity": serde_json::to_value(regularity_report(m)).expect("report serializes"),
        }));
    }
    let v = if infos.len() == 1 { infos.remove(0) } else { Value::Array(infos) };
    emit(out, &json_string(&v))?;
    if let Some(p) = write_mesh {
        emit(Some(p), &list[0].1.to_json())?;
    }
    Ok(())
}
