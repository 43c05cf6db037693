//! Exact verification engine for alternative *-algebras.
//!
//! Algebras are given by rational structure constants together with a linear
//! involution. On top of that the crate provides the Jordan `•`-product and its
//! nested forms, Peirce decompositions relative to a symmetric idempotent,
//! multiplication operators and inner derivations, and linear solvers for the
//! spaces of derivations, *-derivations and *-Jordan n-derivations. All
//! arithmetic is exact.

pub mod algebra;
pub mod catalog;
pub mod claims;
pub mod cli;
pub mod file;
pub mod linalg;
pub mod operators;
pub mod peirce;
pub mod rational;
pub mod report;
pub mod solver;

pub use algebra::{Arity, Element, StructureAlgebra};
pub use linalg::{kernel_basis, rref, subspace_equal, RatMatrix, SubspaceBasis};
pub use rational::Rational;
