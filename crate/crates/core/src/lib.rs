//! Discrete variational calculus for poly-Laplacian systems on finite
//! weighted graphs with Dirichlet boundary.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * [`graph`]: weighted graphs, Dirichlet domains and vertex functions,
//! * [`calculus`]: Laplacian, gradient form, `m`-th order gradient length,
//!   `s`-Laplacian, norms and the weak poly-Laplacian,
//! * [`functionals`]: energies of the coupled system and of the single
//!   equation, their gradients, fibering maps and Nehari classification,
//! * [`analysis`]: embedding constants and the parameter conditions under
//!   which nontrivial solutions are known to exist,
//! * [`solvers`]: ball-constrained descent, a mountain-pass path
//!   deformation, a Nehari ground-state search and solution verification.
//!
//! File formats, configuration and the command-line tool live in the
//! `polylap` crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod calculus;
mod error;
pub mod exact;
pub mod functionals;
pub mod graph;
mod math;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{DirichletDomain, GraphBuilder, GraphFunction, Role, WeightedGraph};
