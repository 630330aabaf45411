//! Fully discrete Stokes complex on polygonal meshes.
//!
//! The sequence `X_rot → X_∇ → X_L²` (with `X_L²mat` hosting the discrete
//! Jacobian) is built from per-cell polynomial reconstructions, assembled into
//! sparse global operators, and used to discretize the Stokes problem.
//!
//! All numerical types are generic over [`Real`]; the aliases at the crate
//! root fix the scalar to `f64`.

// `!(x > y)` is used on purpose so that NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod mesh;
pub mod operators;
pub mod polyspace;
pub mod products;
pub mod spaces;
pub mod stokes;
pub mod verify;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mesh = mesh::Mesh<f64>;
pub type Discretization = spaces::Discretization<f64>;
pub type DofVector = spaces::DofVector<f64>;
pub type Operators = operators::Operators<f64>;
pub type Products = products::Products<f64>;
pub type Scheme = stokes::Scheme<f64>;
pub type StokesProblem = stokes::StokesProblem<f64>;
pub type Solution = stokes::Solution<f64>;
