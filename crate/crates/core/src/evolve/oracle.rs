use std::io::Write;

use crate::error::{Error, Result};
use crate::funcspace::{aligned_steps, GridFunction, TimePath};
use crate::perturbation::BoundaryFunctional;

const DAMPING: f64 = 0.5;
const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_CAP: usize = 100;

/// Solution of `u_t = u_s`, `u(t, b) = Phi(u(t))`, `u(0) = x0` along
/// characteristics.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// Frames at the output step `h_t`.
    pub u: TimePath,
    /// `u(t, b)` at the output times; entry 0 is `x0(b)`.
    pub boundary_trace: Vec<f64>,
    /// `y(tau) = Phi(u(tau))` at every multiple of `h_s`; entry 0 is the
    /// limit `Phi(x0)`.
    pub fine_trace: Vec<f64>,
    /// `max |y(tau) - Phi(u(tau))|` over the marching steps `tau > 0`.
    pub fixed_point_residual: f64,
}

impl OracleSolution {
    /// Boundary trace as `t,y` rows at the output times.
    pub fn write_trace<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "y"])?;
        for (l, y) in self.boundary_trace.iter().enumerate() {
            w.write_record([self.u.time(l).to_string(), y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Marches the boundary trace forward one spatial step at a time.
///
/// At `tau_j = j h_s` the frame is `x0(sigma + tau_j)` for
/// `sigma + tau_j <= b` and `y(tau_j + sigma - b)` beyond, so `Phi(u(tau_j))`
/// only involves earlier trace values except through the node `sigma = b`.
/// That self-reference is resolved by a damped scalar fixed point (damping
/// 0.5, tolerance 1e-12, at most 100 sweeps) before the frame is assembled.
pub fn characteristics_oracle(x0: &GridFunction, phi: &BoundaryFunctional, t_final: f64, h_t: f64) -> Result<OracleSolution> {
    phi.kernel().ensure_compatible(x0)?;
    let grid = *x0.grid();
    let m = grid.last();
    let ratio = match aligned_steps(h_t, grid.step()) {
        Some(r) if r >= 1 => r,
        _ => return Err(Error::Misaligned { what: "time step", value: h_t, step: grid.step() }),
    };
    let outputs = aligned_steps(t_final, ratio as f64 * grid.step())
        .ok_or(Error::Misaligned { what: "final time", value: t_final, step: h_t })?;
    let total = outputs * ratio;
    let x = x0.values();
    let a = phi.boundary_weight();

    let mut y = Vec::with_capacity(total + 1);
    y.push(phi.apply(x0)?);
    let mut residual = 0.0f64;
    for j in 1..=total {
        let value = |i: usize| if i + j <= m { x[i + j] } else { y[i + j - m] };
        let rest = phi.apply_interior_with(value);
        let mut current = y[j - 1];
        let mut settled = false;
        for _ in 0..FIXED_POINT_CAP {
            let next = (1.0 - DAMPING) * current + DAMPING * (rest + a * current);
            let change = (next - current).abs();
            current = next;
            if change <= FIXED_POINT_TOL * current.abs().max(1.0) {
                settled = true;
                break;
            }
        }
        if !settled || !current.is_finite() {
            return Err(Error::FixedPointDiverged { step: j });
        }
        y.push(current);
        residual = residual.max((current - (rest + a * current)).abs());
    }

    let frames: Vec<GridFunction> = (0..=outputs)
        .map(|l| {
            let j = l * ratio;
            let values = (0..=m).map(|i| if i + j <= m { x[i + j] } else { y[i + j - m] }).collect();
            GridFunction::from_raw(grid, x0.p(), values)
        })
        .collect();
    let boundary_trace = frames.iter().map(|f| f.at_boundary()).collect();
    Ok(OracleSolution {
        u: TimePath::from_parts(ratio as f64 * grid.step(), ratio, frames),
        boundary_trace,
        fine_trace: y,
        fixed_point_residual: residual,
    })
}
