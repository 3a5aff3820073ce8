use std::io::Read;

use crate::error::{Error, Result};
use crate::funcspace::io::{interpolate_samples, read_samples};
use crate::funcspace::{Exponent, Grid, GridFunction};

/// Continuous linear functional `Phi(x) = int_{-1}^b x(s) k(s) ds` given by an
/// `L^q` density `k` supported in `[-1, b]`.
///
/// `bound()` is the Hoelder constant `K = ||k||_{L^q[-1, b]}`, computed with
/// the same trapezoid weights as `Phi` and `p_1`, so `|Phi(x)| <= K p_1(x)`
/// holds exactly for the discrete objects too.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunctional {
    kernel: GridFunction,
    q: Exponent,
    bound: f64,
    start: usize,
}

impl BoundaryFunctional {
    pub fn new(kernel: GridFunction) -> Result<Self> {
        let grid = *kernel.grid();
        let start = support_start(&grid)?;
        if kernel.values()[..start].iter().any(|&v| v != 0.0) {
            return Err(Error::InvalidKernel);
        }
        let q = kernel.p().conjugate();
        let bound = crate::funcspace::window_norm(&kernel, q, start);
        Ok(Self { kernel, q, bound, start })
    }

    /// Samples `k` on `[-1, b]` and sets it to zero further left.
    pub fn from_fn(grid: Grid, p: Exponent, k: impl Fn(f64) -> f64) -> Result<Self> {
        let start = support_start(&grid)?;
        let values = grid
            .points()
            .enumerate()
            .map(|(i, s)| if i < start { 0.0 } else { k(s) })
            .collect();
        Self::new(GridFunction::new(grid, p, values)?)
    }

    pub fn zero(grid: Grid, p: Exponent) -> Result<Self> {
        Self::from_fn(grid, p, |_| 0.0)
    }

    /// `k = 1` on `[-1, b]`; `K = (1 + b)^{1/q}`.
    pub fn uniform(grid: Grid, p: Exponent) -> Result<Self> {
        Self::from_fn(grid, p, |_| 1.0)
    }

    /// Smooth bump of height one, compactly supported in `(-1, b)`.
    pub fn bump(grid: Grid, p: Exponent) -> Result<Self> {
        let b = grid.b();
        Self::from_fn(grid, p, |s| Self::bump_profile(s, b))
    }

    /// `exp(1 - 1 / (1 - r^2))` with `r` the position relative to `(-1, b)`
    /// rescaled to `(-1, 1)`.
    pub fn bump_profile(s: f64, b: f64) -> f64 {
        let centre = 0.5 * (b - 1.0);
        let radius = 0.5 * (b + 1.0);
        let r = (s - centre) / radius;
        if r.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        }
    }

    /// Kernel from `s,value` rows, linearly interpolated onto the grid.
    /// Samples left of `-1` are ignored.
    pub fn from_csv<R: Read>(input: R, grid: Grid, p: Exponent) -> Result<Self> {
        let samples = read_samples(input)?;
        Self::from_fn(grid, p, |s| interpolate_samples(&samples, s))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kernel: self.kernel.scaled(factor),
            bound: self.bound * factor.abs(),
            ..self.clone()
        }
    }

    pub fn kernel(&self) -> &GridFunction {
        &self.kernel
    }

    pub fn grid(&self) -> &Grid {
        self.kernel.grid()
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    /// `K` with `|Phi(x)| <= K p_1(x)`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.kernel.is_zero()
    }

    /// `t0^{1/p} K`, the contraction constant of the smoothing integral over a
    /// horizon `t0`.
    pub fn effective_contraction(&self, t0: f64) -> f64 {
        t0.powf(1.0 / self.kernel.p().value()) * self.bound
    }

    /// Quadrature weight times kernel value at `b`: the coefficient of the
    /// boundary value in `Phi(x)`.
    pub fn boundary_weight(&self) -> f64 {
        let grid = self.grid();
        grid.trapezoid_weight(grid.last(), self.start) * self.kernel.at_boundary()
    }

    pub fn apply(&self, x: &GridFunction) -> Result<f64> {
        self.kernel.ensure_compatible(x)?;
        Ok(self.apply_values(x.values()))
    }

    pub(crate) fn apply_values(&self, values: &[f64]) -> f64 {
        self.apply_with(|i| values[i])
    }

    /// `Phi` of the function whose value at grid index `i` is `value(i)`.
    pub(crate) fn apply_with(&self, value: impl Fn(usize) -> f64) -> f64 {
        let k = self.kernel.values();
        let last = k.len() - 1;
        if self.start == last {
            return 0.0;
        }
        let mut acc = 0.5 * (k[self.start] * value(self.start) + k[last] * value(last));
        for (i, &w) in k.iter().enumerate().take(last).skip(self.start + 1) {
            if w != 0.0 {
                acc += w * value(i);
            }
        }
        acc * self.grid().step()
    }

    /// Like [`apply_with`](Self::apply_with) but leaves out the point `b`.
    pub(crate) fn apply_interior_with(&self, value: impl Fn(usize) -> f64) -> f64 {
        let last = self.kernel.values().len() - 1;
        self.apply_with(|i| if i == last { 0.0 } else { value(i) })
    }
}

fn support_start(grid: &Grid) -> Result<usize> {
    if grid.left() < 1.0 {
        return Err(Error::InvalidGrid(format!(
            "kernel support [-1, b] needs L >= 1, got L = {}",
            grid.left()
        )));
    }
    grid.index_of(-1.0)
}
