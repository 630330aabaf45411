//! Discrete Stokes problem: assembly, solution, manufactured solutions,
//! error metrics and convergence studies.

mod assemble;
mod convergence;
mod manufactured;
mod problem;
mod report;
mod solve;

pub use assemble::{assemble, dirichlet_dofs, load_vector, pressure_integral_row, SaddleSystem, Scheme};
pub use convergence::{convergence_study, slopes, ConvergenceRow, ConvergenceTable, Family, Study, DEFAULT_TILT};
pub use manufactured::{Manufactured, SOLUTIONS};
pub use problem::{BoundaryCondition, Forcing, StokesProblem};
pub use report::{error_report, reference_dofs, solution_report, velocity_norm, ErrorReport, Timings};
pub use solve::{solve, solve_sparse, Solution};
