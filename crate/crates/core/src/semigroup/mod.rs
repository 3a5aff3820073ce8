//! The left-shift semigroup `(T(t)x)(s) = x(s + t)` (zero past `b`), its
//! generator stencil, and numerical checks of the semigroup axioms.

mod checks;
mod generator;
pub(crate) mod shift;

pub use checks::{
    check_semigroup_axioms, equicontinuity_constants, generator_defect, generator_residual,
    shift_growth_bound, strong_continuity_modulus, AXIOM_TOLERANCE,
};
pub use generator::{GeneratorKind, GeneratorSpec, Stencil};
pub use shift::ShiftSemigroup;

use crate::error::Result;
use crate::funcspace::GridFunction;

/// A time-evolution operation `x -> U(t) x`.
pub trait Evolution {
    fn evolve(&self, t: f64, x: &GridFunction) -> Result<GridFunction>;
}
