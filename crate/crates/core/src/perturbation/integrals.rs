use super::functional::BoundaryFunctional;
use crate::error::{Error, Result};
use crate::funcspace::{Grid, GridFunction, TimePath};

/// `tau -> Phi(f(tau))` along a path, available at every multiple of `h_s`.
///
/// Frames exist every `h_t = r h_s`; in between the scalar trace is
/// interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalTrace {
    nodes: Vec<f64>,
    ratio: usize,
}

impl FunctionalTrace {
    pub fn new(f: &TimePath, phi: &BoundaryFunctional) -> Result<Self> {
        phi.kernel().ensure_compatible(f.frame(0))?;
        let nodes = f.frames().iter().map(|x| phi.apply_values(x.values())).collect();
        Ok(Self { nodes, ratio: f.ratio() })
    }

    pub(crate) fn from_nodes(nodes: Vec<f64>, ratio: usize) -> Self {
        Self { nodes, ratio }
    }

    /// `Phi(f(t_l))` at the frame times.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Value at `tau = j h_s`.
    #[inline]
    pub fn at_step(&self, j: usize) -> f64 {
        let l = j / self.ratio;
        let r = j % self.ratio;
        if r == 0 {
            self.nodes[l]
        } else {
            let w = r as f64 / self.ratio as f64;
            (1.0 - w) * self.nodes[l] + w * self.nodes[l + 1]
        }
    }
}

/// The smoothing integral over a horizon of `k` spatial steps in closed form:
/// `sigma -> Phi(f(k h_s + sigma - b))` on `[b - k h_s, b]`, zero further left.
pub(crate) fn closed_form(grid: &Grid, p: crate::funcspace::Exponent, trace: &FunctionalTrace, k: usize) -> GridFunction {
    let last = grid.last();
    let mut values = vec![0.0; grid.len()];
    let first = last.saturating_sub(k);
    for (i, v) in values.iter_mut().enumerate().skip(first) {
        *v = trace.at_step(k + i - last);
    }
    GridFunction::from_raw(*grid, p, values)
}

/// `int_0^{t0} T_{-1}(t0 - t) B f(t) dt`, i.e. the function
/// `h(sigma) = Phi(f(t0 - b + sigma))` for `sigma in [b - t0, b]` and zero
/// for `sigma < b - t0`.
pub fn perturb_integral_h(f: &TimePath, t0: f64, phi: &BoundaryFunctional) -> Result<GridFunction> {
    let grid = *f.grid();
    if !(t0 > 0.0) {
        return Err(Error::InvalidHorizon(t0));
    }
    let k = grid.steps(t0)?;
    if k > grid.steps(grid.b())? {
        return Err(Error::HorizonTooLong { t0, b: grid.b() });
    }
    if k > f.steps() * f.ratio() {
        return Err(Error::HorizonTooShort { have: f.t0(), need: t0 });
    }
    let trace = FunctionalTrace::new(f, phi)?;
    Ok(closed_form(&grid, f.p(), &trace, k))
}

/// The primitive `g(t) = int_t^b Phi(f(s)) ds` on `[0, b]`, continued by the
/// constant `int_0^b Phi(f(s)) ds` for `t < 0`. It lies in `D(A)` and its
/// negative derivative is the closed form of the smoothing integral.
pub fn g_primitive(f: &TimePath, phi: &BoundaryFunctional) -> Result<GridFunction> {
    let grid = *f.grid();
    let span = grid.steps(grid.b())?;
    if f.steps() * f.ratio() < span {
        return Err(Error::HorizonTooShort { have: f.t0(), need: grid.b() });
    }
    let trace = FunctionalTrace::new(f, phi)?;
    let h = grid.step();
    // tail[j] = int_{j h}^{b} Phi(f(s)) ds
    let mut tail = vec![0.0; span + 1];
    for j in (0..span).rev() {
        tail[j] = tail[j + 1] + 0.5 * h * (trace.at_step(j) + trace.at_step(j + 1));
    }
    let offset = grid.last() - span;
    let values = (0..grid.len())
        .map(|i| if i >= offset { tail[i - offset] } else { tail[0] })
        .collect();
    GridFunction::new(grid, f.p(), values)
}

/// `(R_bar B f)(t) = int_0^t T_{-1}(t - s) B f(s) ds` for every frame time,
/// evaluated through the closed form. The result starts at zero.
pub fn rbar_b(f: &TimePath, phi: &BoundaryFunctional) -> Result<TimePath> {
    f.ensure_starts_at_zero()?;
    let trace = FunctionalTrace::new(f, phi)?;
    Ok(rbar_b_from_trace(f, &trace))
}

pub(crate) fn rbar_b_from_trace(f: &TimePath, trace: &FunctionalTrace) -> TimePath {
    let grid = *f.grid();
    let frames = (0..=f.steps())
        .map(|l| {
            if l == 0 {
                GridFunction::zeros(grid, f.p())
            } else {
                closed_form(&grid, f.p(), trace, l * f.ratio())
            }
        })
        .collect();
    TimePath::from_parts(f.step(), f.ratio(), frames)
}
