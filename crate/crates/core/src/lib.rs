//! Interpolation constraints for first-order function classes.
//!
//! Pairwise constraint families and their residuals, pointwise extension
//! gaps, counterexample search, and Gram-lifted performance-estimation
//! programs for the subgradient method on weakly convex functions. The crate
//! is `no_std` with `alloc`; solvers and IO live in the `interp` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conic;
pub mod constraints;
pub mod data;
mod error;
pub mod extension;
pub mod family;
pub mod pep;
pub mod search;
pub mod vecops;

pub use conic::{Capabilities, Cone, ConicBackend, ConicProgram, ConicSolution, SolveStatus};
pub use constraints::{eval_pairwise, satisfies, Residual, Satisfaction, Worst};
pub use data::{validate_dataset, DataTriple, Dataset};
pub use error::Error;
pub use extension::{
    extension_gap, grid_oracle_gap, ExtensionGap, GapOptions, GridOptions, Method,
};
pub use family::{family_from_spec, ConstraintFamily, FamilyKind, GramCoefficients, ProblemConfig};

pub type Result<T> = core::result::Result<T, Error>;
