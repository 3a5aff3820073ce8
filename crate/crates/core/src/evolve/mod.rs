//! The perturbed semigroup `S(t)` generated by `Cx = x'`, `x(b) = Phi(x)`:
//! Picard iteration on `S(t) = T(t) + int_0^t T_{-1}(t - s) B S(s) ds`, an
//! independent characteristics solver for `u_t = u_s`, `u(t, b) = Phi(u(t))`,
//! and comparisons between the two.

mod compare;
mod crosscheck;
mod oracle;
mod picard;

pub use compare::{compare_solutions, Comparison};
pub use crosscheck::{resolvent_crosscheck, Crosscheck};
pub use oracle::{characteristics_oracle, OracleSolution};
pub use picard::{picard_semigroup, EvolutionResult, PerturbedSemigroup, PicardConfig, WindowLog};
