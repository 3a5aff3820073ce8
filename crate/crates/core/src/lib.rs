//! Boundary perturbations of the left-shift semigroup on a discretized
//! `L^p_loc(-inf, b]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`funcspace`]: grids, sampled functions, time paths and the graded
//!   seminorms `p_n`, together with the discrete domain predicates.
//! * [`semigroup`]: the exact index-shift semigroup, its generator stencil and
//!   the axiom/equicontinuity/generator checks.
//! * [`perturbation`]: the boundary functional `Phi`, the closed-form smoothing
//!   integrals, the generalized resolvent and its Neumann-series perturbation.
//! * [`evolve`]: the perturbed semigroup by Picard iteration, a characteristics
//!   oracle for the boundary-feedback transport equation, and cross-checks.
//! * [`cli`]: the batch front end behind the `semiperturb` binary.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod funcspace;
pub mod perturbation;
pub mod report;
pub mod samples;
pub mod semigroup;

pub use error::{Error, Result};
pub use funcspace::{Exponent, Grid, GridFunction, SeminormFamily, TimePath};
pub use perturbation::{BoundaryFunctional, NeumannConfig};
pub use report::{CheckReport, CheckRow};
pub use semigroup::{Evolution, GeneratorSpec, ShiftSemigroup};
