use super::Evolution;
use crate::error::{Error, Result};
use crate::funcspace::{Grid, GridFunction};

/// Left shift on a fixed grid. Shifts are exact index moves; no
/// interpolation ever happens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSemigroup {
    grid: Grid,
}

impl ShiftSemigroup {
    pub fn new(grid: Grid) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `T(t) x`; `t` must be a non-negative multiple of `h_s`.
    pub fn apply(&self, t: f64, x: &GridFunction) -> Result<GridFunction> {
        if *x.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let k = self.grid.steps(t)?;
        Ok(shift_steps(x, k))
    }
}

impl Evolution for ShiftSemigroup {
    fn evolve(&self, t: f64, x: &GridFunction) -> Result<GridFunction> {
        self.apply(t, x)
    }
}

/// `T(k h_s) x`. Shifting past the whole grid yields zero.
pub(crate) fn shift_steps(x: &GridFunction, k: usize) -> GridFunction {
    let len = x.values().len();
    let mut out = vec![0.0; len];
    if k < len {
        out[..len - k].copy_from_slice(&x.values()[k..]);
    }
    GridFunction::from_raw(*x.grid(), x.p(), out)
}

/// `out += alpha * T(k h_s) x` without allocating.
pub(crate) fn add_shifted(out: &mut [f64], alpha: f64, x: &[f64], k: usize) {
    let len = x.len();
    if k < len {
        for (o, v) in out[..len - k].iter_mut().zip(&x[k..]) {
            *o += alpha * v;
        }
    }
}
