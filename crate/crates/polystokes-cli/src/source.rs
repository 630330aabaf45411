//! Mesh sources and boundary-condition arguments.

use anyhow::{anyhow, bail, Context, Result};
use polystokes::mesh::load_mesh;
use polystokes::stokes::{BoundaryCondition, Family};
use polystokes::Mesh;

use crate::{MeshArgs, ProblemArgs};

/// The family described by the arguments (files count as a family too).
pub fn family(args: &MeshArgs) -> Result<(Family, Vec<usize>)> {
    match (&args.family, args.meshes.is_empty()) {
        (Some(name), true) => {
            let f: Family = name.parse()?;
            if args.levels.is_empty() {
                bail!("--family needs --levels");
            }
            Ok((f, args.levels.clone()))
        }
        (None, false) => {
            if !args.levels.is_empty() {
                bail!("--levels only applies to --family");
            }
            Ok((Family::Files(args.meshes.clone()), (0..args.meshes.len()).collect()))
        }
        (None, true) => bail!("give either --mesh PATH or --family NAME --levels N"),
        (Some(_), false) => bail!("--mesh and --family are exclusive"),
    }
}

/// All meshes of the source with a short label each.
pub fn meshes(args: &MeshArgs) -> Result<Vec<(String, Mesh)>> {
    let (fam, levels) = family(args)?;
    levels
        .iter()
        .map(|&n| {
            let label = match &fam {
                Family::Files(p) => p[n].display().to_string(),
                _ => format!("{}:{n}", args.family.as_deref().unwrap_or_default()),
            };
            let mesh = match &fam {
                Family::Files(p) => {
                    let bytes = std::fs::read(&p[n]).with_context(|| format!("cannot read {}", p[n].display()))?;
                    load_mesh(&bytes)?
                }
                f => f.mesh(n, args.seed)?,
            };
            Ok((label, mesh))
        })
        .collect()
}

/// Boundary edges lying on one side of the bounding box.
fn side_edges(mesh: &Mesh, side: &str) -> Result<Vec<usize>> {
    let v = mesh.vertices();
    let (mut lo, mut hi) = (v[0], v[0]);
    for p in v {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let tol = 1e-10 * mesh.h();
    let on: Box<dyn Fn(usize) -> bool> = match side {
        "left" => Box::new(|i| (v[i].x - lo.x).abs() <= tol),
        "right" => Box::new(|i| (v[i].x - hi.x).abs() <= tol),
        "bottom" => Box::new(|i| (v[i].y - lo.y).abs() <= tol),
        "top" => Box::new(|i| (v[i].y - hi.y).abs() <= tol),
        _ => bail!("unknown boundary side `{side}`"),
    };
    Ok(mesh.boundary_edges().into_iter().filter(|&e| mesh.edge(e).vertices.iter().all(|&i| on(i))).collect())
}

pub fn boundary_condition(args: &ProblemArgs, mesh: &Mesh) -> Result<BoundaryCondition> {
    match args.bc.as_str() {
        "neumann" | "dirichlet" if !args.gamma_d.is_empty() => bail!("--gamma-d only applies to --bc mixed"),
        "neumann" => Ok(BoundaryCondition::Neumann),
        "dirichlet" => Ok(BoundaryCondition::Dirichlet),
        "mixed" => {
            if args.gamma_d.is_empty() {
                bail!("--bc mixed needs --gamma-d");
            }
            let mut edges = Vec::new();
            for tok in &args.gamma_d {
                let tok = tok.trim();
                match tok.parse::<usize>() {
                    Ok(e) => edges.push(e),
                    Err(_) => edges.extend(side_edges(mesh, tok)?),
                }
            }
            Ok(BoundaryCondition::Mixed(edges))
        }
        other => Err(anyhow!("unknown boundary condition `{other}`")),
    }
}
