//! Discrete rotor, gradient, divergence and potential.

pub mod edge;
mod global;
pub mod local;

pub use global::Operators;
pub use local::{cell_fields, local_dim, LocalOperators};

#[cfg(test)]
mod tests;
