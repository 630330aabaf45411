//! Dof layouts and interpolators of the discrete spaces.

mod discretization;
mod dofmap;
mod dofvector;
mod interpolate;

pub use discretization::{Discretization, Options, VrotSign};
pub use dofmap::{DofMap, SpaceKind};
pub use dofvector::DofVector;
pub use interpolate::{MatrixFn, ScalarFn, VectorFn};
