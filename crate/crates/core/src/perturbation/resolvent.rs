use crate::error::{Error, Result};
use crate::funcspace::{GridFunction, TimePath};
use crate::semigroup::shift::add_shifted;
use crate::semigroup::GeneratorSpec;

/// A generalized resolvent `f -> (t -> int_0^t S(t - s) f(s) ds)` acting on
/// paths that start at zero.
pub trait Resolvent {
    fn resolve(&self, f: &TimePath) -> Result<TimePath>;

    /// A constant `M` with `p^inf(R f) <= M p^1(f)` over the horizon `t0`.
    fn continuity_constant(&self, t0: f64) -> f64;

    fn name(&self) -> &str;
}

/// The resolvent of the unperturbed shift semigroup.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ShiftResolvent;

impl Resolvent for ShiftResolvent {
    fn resolve(&self, f: &TimePath) -> Result<TimePath> {
        resolvent_path(f)
    }

    fn continuity_constant(&self, _t0: f64) -> f64 {
        1.0
    }

    fn name(&self) -> &str {
        "shift"
    }
}

/// `(R f)(t) = int_0^t T(t - s) f(s) ds` at a single frame time, by the
/// trapezoid rule over the frames of `f`.
pub fn resolvent_r(f: &TimePath, t: f64) -> Result<GridFunction> {
    f.ensure_starts_at_zero()?;
    let j = f.index_of(t)?;
    let grid = *f.grid();
    let mut out = vec![0.0; grid.len()];
    if j > 0 {
        let h = f.step();
        for l in 0..=j {
            let w = if l == 0 || l == j { 0.5 * h } else { h };
            add_shifted(&mut out, w, f.frame(l).values(), (j - l) * f.ratio());
        }
    }
    GridFunction::new(grid, f.p(), out)
}

/// `R f` at every frame time.
///
/// Uses `R f(t + h) = T(h) R f(t) + h/2 (T(h) f(t) + f(t + h))`, which is
/// the same trapezoid sum as [`resolvent_r`] because the shift is exact.
pub fn resolvent_path(f: &TimePath) -> Result<TimePath> {
    f.ensure_starts_at_zero()?;
    let grid = *f.grid();
    let k = f.ratio();
    let half = 0.5 * f.step();
    let mut frames = Vec::with_capacity(f.frames().len());
    let mut current = vec![0.0; grid.len()];
    frames.push(GridFunction::from_raw(grid, f.p(), current.clone()));
    for l in 0..f.steps() {
        let mut next = vec![0.0; grid.len()];
        add_shifted(&mut next, 1.0, &current, k);
        add_shifted(&mut next, half, f.frame(l).values(), k);
        for (o, v) in next.iter_mut().zip(f.frame(l + 1).values()) {
            *o += half * v;
        }
        current = next;
        frames.push(GridFunction::from_raw(grid, f.p(), current.clone()));
    }
    Ok(TimePath::from_parts(f.step(), k, frames))
}

/// Time derivative by second-order differences: centred inside, one-sided at
/// both ends.
pub fn time_derivative(f: &TimePath) -> Result<TimePath> {
    let last = f.steps();
    if last < 2 {
        return Err(Error::ShapeMismatch("time derivative needs at least three frames".into()));
    }
    let inv = 1.0 / (2.0 * f.step());
    let frame = |l: usize| f.frame(l).values();
    let frames = (0..=last)
        .map(|l| {
            let values: Vec<f64> = if l == 0 {
                (0..frame(0).len())
                    .map(|i| (-3.0 * frame(0)[i] + 4.0 * frame(1)[i] - frame(2)[i]) * inv)
                    .collect()
            } else if l == last {
                (0..frame(0).len())
                    .map(|i| (3.0 * frame(l)[i] - 4.0 * frame(l - 1)[i] + frame(l - 2)[i]) * inv)
                    .collect()
            } else {
                frame(l + 1).iter().zip(frame(l - 1)).map(|(a, b)| (a - b) * inv).collect()
            };
            GridFunction::from_raw(*f.grid(), f.p(), values)
        })
        .collect();
    Ok(TimePath::from_parts(f.step(), f.ratio(), frames))
}

/// The generator stencil applied frame by frame.
pub fn generator_path(gen: &GeneratorSpec, f: &TimePath) -> Result<TimePath> {
    f.map_frames(|x| Ok(gen.apply(x)))
}
