//! Rank-one boundary perturbation `Bx = -Phi(x) A_{-1} 1` of the shift
//! semigroup.
//!
//! The extrapolation space never appears. Every smoothing integral
//! `int T_{-1}(t - s) B f(s) ds` is evaluated through its closed form
//! `sigma -> Phi(f(t + sigma - b))` on `[b - t, b]`, which lies in `X`.

mod contraction;
mod dembart;
mod functional;
mod integrals;
mod neumann;
mod resolvent;

pub use contraction::{estimate_contraction, quadrature_slack, ContractionEstimate};
pub use dembart::{dembart_check, DembartCheck};
pub use functional::BoundaryFunctional;
pub use integrals::{g_primitive, perturb_integral_h, rbar_b, FunctionalTrace};
pub use neumann::{neumann_resolvent, NeumannConfig, NeumannOutcome, NeumannTerm, PerturbedResolvent};
pub use resolvent::{generator_path, resolvent_path, resolvent_r, time_derivative, Resolvent, ShiftResolvent};
