use super::function::{Exponent, GridFunction};
use super::grid::{aligned_steps, Grid};
use crate::error::{Error, Result};

/// A path `f: [0, t0] -> X` sampled at `0, h_t, ..., t0`.
///
/// `h_t` is always an integer multiple of the spatial step, so that shifting
/// by elapsed time is an exact index shift.
#[derive(Debug, Clone, PartialEq)]
pub struct TimePath {
    step: f64,
    ratio: usize,
    frames: Vec<GridFunction>,
}

impl TimePath {
    pub fn new(step: f64, frames: Vec<GridFunction>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a path needs at least one frame".into()))?;
        let grid = *first.grid();
        let ratio = match aligned_steps(step, grid.step()) {
            Some(r) if r >= 1 => r,
            _ => return Err(Error::Misaligned { what: "time step", value: step, step: grid.step() }),
        };
        for frame in &frames[1..] {
            first.ensure_compatible(frame)?;
        }
        Ok(Self { step: ratio as f64 * grid.step(), ratio, frames })
    }

    /// Samples `f(t, s)` on the time grid of horizon `t0` and step `h_t`.
    pub fn from_fn(
        grid: Grid,
        p: Exponent,
        t0: f64,
        step: f64,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let count = time_steps(t0, step)?;
        let frames = (0..=count)
            .map(|l| {
                let t = l as f64 * step;
                GridFunction::from_fn(grid, p, |s| f(t, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(step, frames)
    }

    pub fn zeros(grid: Grid, p: Exponent, t0: f64, step: f64) -> Result<Self> {
        let count = time_steps(t0, step)?;
        Self::new(step, vec![GridFunction::zeros(grid, p); count + 1])
    }

    /// The constant path `f(t) = x`.
    pub fn constant(x: &GridFunction, t0: f64, step: f64) -> Result<Self> {
        let count = time_steps(t0, step)?;
        Self::new(step, vec![x.clone(); count + 1])
    }

    /// `f(t) = phi(t) x` for a scalar profile `phi`.
    pub fn separable(x: &GridFunction, t0: f64, step: f64, phi: impl Fn(f64) -> f64) -> Result<Self> {
        let count = time_steps(t0, step)?;
        let frames = (0..=count).map(|l| x.scaled(phi(l as f64 * step))).collect();
        Self::new(step, frames)
    }

    pub(crate) fn from_parts(step: f64, ratio: usize, frames: Vec<GridFunction>) -> Self {
        Self { step, ratio, frames }
    }

    pub fn grid(&self) -> &Grid {
        self.frames[0].grid()
    }

    pub fn p(&self) -> Exponent {
        self.frames[0].p()
    }

    /// Time step `h_t`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// `h_t / h_s`.
    pub fn ratio(&self) -> usize {
        self.ratio
    }

    /// Horizon `t0`.
    pub fn t0(&self) -> f64 {
        (self.frames.len() - 1) as f64 * self.step
    }

    /// Number of time steps (frames minus one).
    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn time(&self, l: usize) -> f64 {
        l as f64 * self.step
    }

    pub fn frames(&self) -> &[GridFunction] {
        &self.frames
    }

    pub fn frame(&self, l: usize) -> &GridFunction {
        &self.frames[l]
    }

    pub fn into_frames(self) -> Vec<GridFunction> {
        self.frames
    }

    /// Frame index of time `t`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        match aligned_steps(t, self.step) {
            Some(l) if l < self.frames.len() => Ok(l),
            Some(_) => Err(Error::HorizonTooShort { have: self.t0(), need: t }),
            None => Err(Error::Misaligned { what: "time", value: t, step: self.step }),
        }
    }

    pub fn ensure_compatible(&self, other: &TimePath) -> Result<()> {
        if self.frames.len() != other.frames.len() || self.ratio != other.ratio {
            return Err(Error::ShapeMismatch(format!(
                "paths with {} frames (ratio {}) and {} frames (ratio {})",
                self.frames.len(),
                self.ratio,
                other.frames.len(),
                other.ratio
            )));
        }
        self.frames[0].ensure_compatible(&other.frames[0])
    }

    pub fn combine(&self, alpha: f64, other: &TimePath, beta: f64) -> Result<Self> {
        self.ensure_compatible(other)?;
        let frames = self
            .frames
            .iter()
            .zip(&other.frames)
            .map(|(a, b)| a.combine(alpha, b, beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { frames, ..self.empty_like() })
    }

    pub fn sub(&self, other: &TimePath) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &TimePath) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self { frames: self.frames.iter().map(|f| f.scaled(alpha)).collect(), ..self.empty_like() }
    }

    pub fn map_frames(&self, f: impl Fn(&GridFunction) -> Result<GridFunction>) -> Result<Self> {
        let frames = self.frames.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.step, frames)
    }

    fn empty_like(&self) -> Self {
        Self { step: self.step, ratio: self.ratio, frames: Vec::new() }
    }

    /// The restriction to `[0, t]`.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        let l = self.index_of(t)?;
        Ok(Self { frames: self.frames[..=l].to_vec(), ..self.empty_like() })
    }

    /// `max |f(0)|`, zero for members of the path space `{f(0) = 0}`.
    pub fn initial_defect(&self) -> f64 {
        self.frames[0].max_abs()
    }

    /// Rejects paths that do not start at zero, up to a relative tolerance.
    pub fn ensure_starts_at_zero(&self) -> Result<()> {
        let scale = self.frames.iter().fold(1.0f64, |m, f| m.max(f.max_abs()));
        let defect = self.initial_defect();
        if defect <= 1e-12 * scale {
            Ok(())
        } else {
            Err(Error::NotInPathSpace(defect))
        }
    }

    /// `p_n^inf(f) = max_t p_n(f(t))`.
    pub fn sup_seminorm(&self, n: usize) -> Result<f64> {
        let start = self.grid().window_start(n)?;
        Ok(self
            .frames
            .iter()
            .map(|f| super::function::window_seminorm(f.values(), f.grid(), f.p(), start))
            .fold(0.0, f64::max))
    }

    /// `p_n^1(f) = int_0^{t0} p_n(f(t)) dt` by the trapezoid rule.
    pub fn l1_seminorm(&self, n: usize) -> Result<f64> {
        let start = self.grid().window_start(n)?;
        let values: Vec<f64> = self
            .frames
            .iter()
            .map(|f| super::function::window_seminorm(f.values(), f.grid(), f.p(), start))
            .collect();
        Ok(trapezoid(&values, self.step))
    }

    /// Per-frame seminorms for each requested index, `out[k][l] = p_{n_k}(f(t_l))`.
    pub fn frame_seminorms(&self, indices: &[usize]) -> Result<Vec<Vec<f64>>> {
        let starts = indices
            .iter()
            .map(|&n| self.grid().window_start(n))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![Vec::with_capacity(self.frames.len()); indices.len()];
        for f in &self.frames {
            let norms = super::function::nested_seminorms(f.values(), f.grid(), f.p(), &starts);
            for (k, v) in norms.into_iter().enumerate() {
                out[k].push(v);
            }
        }
        Ok(out)
    }
}

pub(crate) fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        len => step * (values[1..len - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[len - 1])),
    }
}

pub(crate) fn time_steps(t0: f64, step: f64) -> Result<usize> {
    if !(t0 >= 0.0 && t0.is_finite()) {
        return Err(Error::InvalidHorizon(t0));
    }
    aligned_steps(t0, step).ok_or(Error::Misaligned { what: "horizon", value: t0, step })
}

/// The graded family `p_0 <= p_1 <= ... <= p_{n_max}` together with its sup-
/// and L^1-lifts to paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormFamily {
    grid: Grid,
    p: Exponent,
    n_max: usize,
}

impl SeminormFamily {
    pub fn new(grid: Grid, p: Exponent, n_max: usize) -> Result<Self> {
        grid.window_start(n_max)?;
        Ok(Self { grid, p, n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize, grid: &Grid, p: Exponent) -> Result<()> {
        if n > self.n_max {
            return Err(Error::IndexOutOfRange { n, max: self.n_max });
        }
        if *grid != self.grid || p != self.p {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn seminorm(&self, x: &GridFunction, n: usize) -> Result<f64> {
        self.check(n, x.grid(), x.p())?;
        x.seminorm(n)
    }

    pub fn sup_seminorm(&self, f: &TimePath, n: usize) -> Result<f64> {
        self.check(n, f.grid(), f.p())?;
        f.sup_seminorm(n)
    }

    pub fn l1_seminorm(&self, f: &TimePath, n: usize) -> Result<f64> {
        self.check(n, f.grid(), f.p())?;
        f.l1_seminorm(n)
    }
}
