use super::grid::Grid;
use crate::error::{Error, Result};

/// Integrability exponent `p` with `1 < p < inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p > 1.0 && p.is_finite() {
            Ok(Self(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Hoelder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        Self(self.0 / (self.0 - 1.0))
    }

    #[inline]
    pub fn pow_abs(self, v: f64) -> f64 {
        if v == 0.0 {
            0.0
        } else if self.0 == 2.0 {
            v * v
        } else {
            v.abs().powf(self.0)
        }
    }

    #[inline]
    pub fn root(self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if self.0 == 2.0 {
            s.sqrt()
        } else {
            s.powf(1.0 / self.0)
        }
    }
}

/// Samples of an element of `X` on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    p: Exponent,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, p: Exponent, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, p, values })
    }

    pub fn from_fn(grid: Grid, p: Exponent, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, p, values)
    }

    pub fn zeros(grid: Grid, p: Exponent) -> Self {
        Self { grid, p, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: Grid, p: Exponent, c: f64) -> Result<Self> {
        Self::new(grid, p, vec![c; grid.len()])
    }

    pub(crate) fn from_raw(grid: Grid, p: Exponent, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, p, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the right endpoint `b`.
    pub fn at_boundary(&self) -> f64 {
        self.values[self.grid.last()]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn ensure_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid && self.p == other.p {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &GridFunction, beta: f64) -> Result<Self> {
        self.ensure_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        Ok(Self::from_raw(self.grid, self.p, values))
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self::from_raw(self.grid, self.p, self.values.iter().map(|v| alpha * v).collect())
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &GridFunction) -> Result<()> {
        self.ensure_compatible(other)?;
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += alpha * y;
        }
        Ok(())
    }

    /// `p_n(x) = (int_{-n}^b |x|^p)^{1/p}` by the composite trapezoid rule.
    pub fn seminorm(&self, n: usize) -> Result<f64> {
        let start = self.grid.window_start(n)?;
        Ok(window_seminorm(&self.values, &self.grid, self.p, start))
    }

    /// Seminorms for several indices in one sweep over the widest window.
    pub fn seminorms(&self, indices: &[usize]) -> Result<Vec<f64>> {
        let starts = indices
            .iter()
            .map(|&n| self.grid.window_start(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(nested_seminorms(&self.values, &self.grid, self.p, &starts))
    }
}

/// `(int_{s_start}^b |x|^r)^{1/r}` for an exponent `r` other than the one `x`
/// carries (used for the `L^q` norm of kernels).
pub(crate) fn window_norm(x: &GridFunction, r: Exponent, start: usize) -> f64 {
    window_seminorm(&x.values, &x.grid, r, start)
}

pub(crate) fn window_seminorm(values: &[f64], grid: &Grid, p: Exponent, start: usize) -> f64 {
    let last = grid.last();
    if start >= last {
        return 0.0;
    }
    let interior: f64 = values[start + 1..last].iter().map(|&v| p.pow_abs(v)).sum();
    let ends = 0.5 * (p.pow_abs(values[start]) + p.pow_abs(values[last]));
    p.root(grid.step() * (interior + ends))
}

/// Seminorms over the windows `[s_start, b]` for every entry of `starts`,
/// sharing one right-to-left accumulation.
pub(crate) fn nested_seminorms(values: &[f64], grid: &Grid, p: Exponent, starts: &[usize]) -> Vec<f64> {
    let last = grid.last();
    let lowest = starts.iter().copied().min().unwrap_or(last);
    // suffix[i - lowest] = sum_{j >= i} |v_j|^p
    let mut suffix = vec![0.0; last + 1 - lowest];
    let mut acc = 0.0;
    for i in (lowest..=last).rev() {
        acc += p.pow_abs(values[i]);
        suffix[i - lowest] = acc;
    }
    let right = p.pow_abs(values[last]);
    starts
        .iter()
        .map(|&s| {
            if s >= last {
                0.0
            } else {
                let total = suffix[s - lowest] - 0.5 * p.pow_abs(values[s]) - 0.5 * right;
                p.root(grid.step() * total.max(0.0))
            }
        })
        .collect()
}
