//! Polynomial bases, quadrature and the Koszul / matrix-valued spaces.

pub mod basis;
pub mod cell;
pub mod context;
pub mod edge;
pub mod monomial;
pub mod quadrature;

#[cfg(test)]
mod tests;

pub use basis::{Arity, Basis, DomainKind, SpaceTag};
pub use cell::{rank, CellPolys, RtbBasis};
pub use context::{build_contexts, CellContext, LocalEdge};
pub use edge::EdgePolys;
pub use quadrature::Quadrature;
