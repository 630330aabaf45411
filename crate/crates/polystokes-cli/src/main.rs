//! `polystokes`: solve, converge, verify and meshinfo front end.

// `!(x > y)` is used on purpose so that NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod source;
mod svg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "polystokes", version, about = "Stokes complex on polygonal meshes")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

/// Where meshes come from: files, or a generated family.
#[derive(Args, Debug, Clone)]
pub struct MeshArgs {
    /// Mesh file (JSON). Repeat to give one file per level.
    #[arg(long = "mesh", value_name = "PATH", conflicts_with = "family")]
    pub meshes: Vec<std::path::PathBuf>,
    /// Generated family: cartesian, hexagonal, tilted or tilted:AMPLITUDE.
    #[arg(long)]
    pub family: Option<String>,
    /// Refinement levels of the family, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "N,N,..")]
    pub levels: Vec<usize>,
    /// Seed of the tilted family.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// Boundary condition: neumann, dirichlet or mixed.
    #[arg(long, default_value = "dirichlet")]
    pub bc: String,
    /// Dirichlet edges of a mixed condition: edge ids and/or left, right,
    /// bottom, top.
    #[arg(long = "gamma-d", value_delimiter = ',', value_name = "EDGES")]
    pub gamma_d: Vec<String>,
    /// Manufactured solution (superbubble, bubble-dirichlet) or `zero` for f ≡ 0.
    #[arg(long, default_value = "superbubble")]
    pub solution: String,
    /// Viscosity.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one Stokes problem and write a JSON report.
    Solve {
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Report path (stdout if absent).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Also write the velocity and pressure dofs next to this path.
        #[arg(long)]
        save: Option<std::path::PathBuf>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run a convergence study and write the rate table as CSV.
    Converge {
        #[command(flatten)]
        mesh: MeshArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        degree: Vec<usize>,
        /// CSV path (stdout if absent); suffixed with -kK for several degrees.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Log-log plot of all degrees.
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
        /// Full JSON reports of every level.
        #[arg(long)]
        json: Option<std::path::PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Check the algebraic properties of the discrete complex.
    Verify {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        degree: Vec<usize>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Use the wrong sign for the normal part of VROT on edges (the
        /// complex check is then expected to fail).
        #[arg(long)]
        flip_vrot: bool,
    },
    /// Entity counts and regularity indicators of a mesh.
    Meshinfo {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Write the mesh back in canonical form.
        #[arg(long, value_name = "PATH")]
        write_mesh: Option<std::path::PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { mesh, problem, degree, out, save, timings } => commands::solve(&mesh, &problem, degree, out.as_deref(), save.as_deref(), timings),
        Command::Converge { mesh, problem, degree, out, svg, json, timings } => {
            commands::converge(&mesh, &problem, &degree, out.as_deref(), svg.as_deref(), json.as_deref(), timings)
        }
        Command::Verify { mesh, degree, out, flip_vrot } => commands::verify(&mesh, &degree, out.as_deref(), flip_vrot),
        Command::Meshinfo { mesh, out, write_mesh } => commands::meshinfo(&mesh, out.as_deref(), write_mesh.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(commands::EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
