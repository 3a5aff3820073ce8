//! Discretized function space `X = L^p_loc(-inf, b]` truncated to `[-L, b]`.
//!
//! Since the left shift only ever pulls values from the right, truncating the
//! half-line at `-L` never changes a seminorm `p_n` with `n <= L`.

mod domain;
mod function;
mod grid;
pub mod io;
mod path;

pub use domain::{in_domain_a, in_domain_c, DomainCheck, DomainPredicate};
pub use function::{Exponent, GridFunction};
pub(crate) use function::{nested_seminorms, window_norm};
pub use grid::{aligned_steps, Grid};
pub use path::{SeminormFamily, TimePath};
pub(crate) use path::trapezoid;
