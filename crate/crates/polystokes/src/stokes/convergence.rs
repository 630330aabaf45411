use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use super::assemble::{assemble, Scheme};
use super::manufactured::Manufactured;
use super::problem::{BoundaryCondition, StokesProblem};
use super::report::{solution_report, ErrorReport};
use super::solve::solve;
use crate::error::{Error, Result};
use crate::mesh::fmt17;
use crate::mesh::{generate_cartesian, generate_hexagonal, load_mesh, perturb, Mesh};
use crate::Real;

/// Mesh family of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Cartesian,
    Hexagonal,
    /// Cartesian grids with vertices moved by a fraction of the local size.
    Tilted(f64),
    /// One mesh file per level.
    Files(Vec<PathBuf>),
}

pub const DEFAULT_TILT: f64 = 0.2;

impl FromStr for Family {
    type Err = Error;

    /// `cartesian`, `hexagonal`, `tilted` or `tilted:AMPLITUDE`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Self::Cartesian),
            "hexagonal" => Ok(Self::Hexagonal),
            "tilted" => Ok(Self::Tilted(DEFAULT_TILT)),
            _ => {
                if let Some(a) = s.strip_prefix("tilted:") {
                    let a: f64 = a.parse().map_err(|_| Error::InvalidArgument(format!("bad tilt amplitude `{a}`")))?;
                    Ok(Self::Tilted(a))
                } else {
                    Err(Error::Unknown { what: "mesh family", name: s.into() })
                }
            }
        }
    }
}

impl Family {
    /// Mesh of refinement level `n` (ignored for files, where `n` indexes the list).
    pub fn mesh<T: Real>(&self, n: usize, seed: u64) -> Result<Mesh<T>> {
        match self {
            Self::Cartesian => generate_cartesian(n),
            Self::Hexagonal => generate_hexagonal(n),
            Self::Tilted(a) => perturb(&generate_cartesian(n)?, T::of(*a), seed),
            Self::Files(paths) => {
                let path = paths.get(n).ok_or_else(|| Error::InvalidArgument(format!("no mesh file for level {n}")))?;
                load_mesh(&std::fs::read(path)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub dofs: usize,
    pub err: f64,
    /// Slope log(e_{i−1}/e_i) / log(h_{i−1}/h_i); absent on the first row.
    pub rate: Option<f64>,
    pub report: ErrorReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub k: usize,
    pub bc: String,
    pub solution: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn final_slope(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.rate)
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.rate).collect()
    }

    /// CSV with header `h,dofs,err,rate` (empty rate on the first row).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,dofs,err,rate\n");
        for r in &self.rows {
            let rate = r.rate.map(fmt17).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{}", fmt17(r.h), r.dofs, fmt17(r.err), rate);
        }
        s
    }
}

/// Pairwise slopes log(e_{i−1}/e_i) / log(h_{i−1}/h_i).
pub fn slopes(h: &[f64], e: &[f64]) -> Vec<f64> {
    h.windows(2).zip(e.windows(2)).map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect()
}

/// Parameters of a convergence study.
#[derive(Clone, Debug)]
pub struct Study {
    pub family: Family,
    pub levels: Vec<usize>,
    pub k: usize,
    pub bc: BoundaryCondition,
    pub solution: String,
    pub mu: f64,
    pub seed: u64,
}

pub fn convergence_study(study: &Study) -> Result<ConvergenceTable> {
    let n_levels = match &study.family {
        Family::Files(p) => p.len(),
        _ => study.levels.len(),
    };
    if n_levels < 2 {
        return Err(Error::InvalidArgument("a convergence study needs at least two levels".into()));
    }
    let m = Manufactured::by_name(&study.solution)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_levels);
    for i in 0..n_levels {
        let level = match &study.family {
            Family::Files(_) => i,
            _ => study.levels[i],
        };
        let mesh = study.family.mesh::<f64>(level, study.seed)?;
        let problem = StokesProblem::manufactured(study.k, study.mu, study.bc.clone(), m.clone());
        let scheme = Scheme::new(&mesh, study.k)?;
        let system = assemble(&scheme, &problem)?;
        let sol = solve(&scheme.disc, &system)?;
        let report = solution_report(&scheme, &problem, &sol, system.assembly_seconds)?;
        log::info!("k={} level {level}: h={:.4e} err={:.4e}", study.k, report.h, report.error_rel);
        let rate = rows.last().map(|p| slopes(&[p.h, report.h], &[p.err, report.error_rel])[0]);
        rows.push(ConvergenceRow { h: report.h, dofs: report.dofs, err: report.error_rel, rate, report });
    }
    Ok(ConvergenceTable { k: study.k, bc: study.bc.name().into(), solution: study.solution.clone(), rows })
}
