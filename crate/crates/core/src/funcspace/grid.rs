use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a real number is an integer
/// multiple of a step.
const ALIGN_TOL: f64 = 1e-9;

/// Returns `value / step` when it is a non-negative integer up to rounding.
pub fn aligned_steps(value: f64, step: f64) -> Option<usize> {
    if !value.is_finite() || !step.is_finite() || step <= 0.0 || value < 0.0 {
        return None;
    }
    let ratio = value / step;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= ALIGN_TOL * nearest.max(1.0) {
        Some(nearest as usize)
    } else {
        None
    }
}

/// Uniform grid `-L = s_0 < s_1 < ... < s_m = b` with spacing `h_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    b: f64,
    left: f64,
    step: f64,
    cells: usize,
}

impl Grid {
    pub fn new(b: f64, left: f64, step: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidGrid(format!("right endpoint b = {b} must be positive")));
        }
        if !(left > 0.0 && left.is_finite()) {
            return Err(Error::InvalidGrid(format!("left truncation L = {left} must be positive")));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidGrid(format!("step h_s = {step} must be positive")));
        }
        let cells = aligned_steps(b + left, step).ok_or_else(|| {
            Error::InvalidGrid(format!("(b + L) / h_s = {} is not an integer", (b + left) / step))
        })?;
        aligned_steps(b, step).ok_or_else(|| {
            Error::InvalidGrid(format!("b / h_s = {} is not an integer", b / step))
        })?;
        Ok(Self { b, left, step, cells })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Left truncation length `L` (the grid starts at `-L`).
    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Index of the right endpoint `b`.
    pub fn last(&self) -> usize {
        self.cells
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.cells {
            self.b
        } else {
            -self.left + i as f64 * self.step
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Index of the grid point at position `s`.
    pub fn index_of(&self, s: f64) -> Result<usize> {
        let offset = s + self.left;
        match aligned_steps(offset, self.step) {
            Some(i) if i <= self.cells => Ok(i),
            _ => Err(Error::Misaligned { what: "position", value: s, step: self.step }),
        }
    }

    /// Number of spatial steps covered by a non-negative time `t`.
    pub fn steps(&self, t: f64) -> Result<usize> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        aligned_steps(t, self.step).ok_or(Error::Misaligned { what: "time", value: t, step: self.step })
    }

    /// Largest seminorm index whose window `[-n, b]` fits inside the grid.
    pub fn max_index(&self) -> usize {
        (self.left + ALIGN_TOL).floor() as usize
    }

    /// Index of `-n`, the left end of the window of `p_n`.
    pub fn window_start(&self, n: usize) -> Result<usize> {
        if n > self.max_index() {
            return Err(Error::IndexOutOfRange { n, max: self.max_index() });
        }
        self.index_of(-(n as f64))
    }

    /// Trapezoid weight of point `i` for a window running from `start` to `b`.
    pub fn trapezoid_weight(&self, i: usize, start: usize) -> f64 {
        if start == self.cells || i < start {
            0.0
        } else if i == start || i == self.cells {
            0.5 * self.step
        } else {
            self.step
        }
    }

    /// The same interval with half the spacing.
    pub fn refined(&self) -> Self {
        Self { step: 0.5 * self.step, cells: 2 * self.cells, ..*self }
    }

    pub fn with_step(&self, step: f64) -> Result<Self> {
        Self::new(self.b, self.left, step)
    }
}
