use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{aligned_steps, GridFunction, TimePath};
use crate::perturbation::{BoundaryFunctional, FunctionalTrace};
use crate::semigroup::Evolution;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardConfig {
    pub h_t: f64,
    pub t_final: f64,
    /// Stop once successive iterates differ by less than `tol` in every
    /// tracked `p_n^inf`.
    pub tol: f64,
    pub max_iter: usize,
    pub tracked: Vec<usize>,
    /// Windows are the longest multiples of `h_t` with `t^{1/p} K <= window_target`.
    pub window_target: f64,
}

impl PicardConfig {
    pub fn new(h_t: f64, t_final: f64) -> Self {
        Self { h_t, t_final, tol: 1e-12, max_iter: 200, tracked: vec![1], window_target: 0.5 }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_tracked(mut self, tracked: Vec<usize>) -> Self {
        self.tracked = tracked;
        self
    }
}

/// Iteration record of one horizon window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowLog {
    pub start: f64,
    pub steps: usize,
    pub k_eff: f64,
    /// `increments[k][j]`: `p_n^inf(S^(k+1) - S^(k))` for tracked index `j`.
    pub increments: Vec<Vec<f64>>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    /// `S(t) x0` on `[0, t_final]`.
    pub path: TimePath,
    pub iterations: usize,
    /// `(n, last increment)`, worst over windows.
    pub final_increment: Vec<(usize, f64)>,
    pub converged: bool,
    pub windows: Vec<WindowLog>,
}

/// `S(t) x0` by Picard iteration `S^(k+1)(t) = T(t) + G[S^(k)](t)`, starting
/// from `S^(0) = T`, with
/// `G[g](t)(sigma) = Phi(g(t + sigma - b))` for `sigma > b - t`.
///
/// `Phi(g(tau))` is known at the frame times; between them it is interpolated
/// linearly. The node `sigma = b - t` belongs to `T(t) x0`, which already
/// carries `x0(b)` there. The horizon is split into windows of length at
/// most `(window_target / K)^p` and the windows are composed. Running out of
/// iterations is flagged in the result, not raised.
pub fn picard_semigroup(x0: &GridFunction, phi: &BoundaryFunctional, cfg: &PicardConfig) -> Result<EvolutionResult> {
    phi.kernel().ensure_compatible(x0)?;
    let grid = *x0.grid();
    let ratio = match aligned_steps(cfg.h_t, grid.step()) {
        Some(r) if r >= 1 => r,
        _ => return Err(Error::Misaligned { what: "time step", value: cfg.h_t, step: grid.step() }),
    };
    let total = aligned_steps(cfg.t_final, cfg.h_t)
        .ok_or(Error::Misaligned { what: "final time", value: cfg.t_final, step: cfg.h_t })?;
    if cfg.max_iter == 0 || !(cfg.tol > 0.0) || cfg.tracked.is_empty() {
        return Err(Error::Config("Picard iteration needs max_iter >= 1, tol > 0 and tracked indices".into()));
    }
    let h_t = ratio as f64 * grid.step();
    let per_window = window_steps(phi, h_t, cfg.window_target, total)?;

    let mut frames = vec![x0.clone()];
    let mut windows = Vec::new();
    let mut iterations = 0;
    let mut converged = true;
    let mut final_increment = vec![0.0f64; cfg.tracked.len()];
    let mut done = 0;
    while done < total {
        let steps = per_window.min(total - done);
        let start = frames.last().expect("at least the initial frame").clone();
        let (window, log) = iterate_window(&start, phi, ratio, steps, cfg)?;
        iterations += log.increments.len();
        converged &= log.converged;
        if let Some(last) = log.increments.last() {
            for (f, v) in final_increment.iter_mut().zip(last) {
                *f = f.max(*v);
            }
        }
        windows.push(WindowLog { start: done as f64 * h_t, ..log });
        frames.extend(window.into_iter().skip(1));
        done += steps;
    }
    let final_increment = cfg.tracked.iter().copied().zip(final_increment).collect();
    Ok(EvolutionResult {
        path: TimePath::from_parts(h_t, ratio, frames),
        iterations,
        final_increment,
        converged,
        windows,
    })
}

fn window_steps(phi: &BoundaryFunctional, h_t: f64, target: f64, total: usize) -> Result<usize> {
    if phi.is_zero() {
        return Ok(total.max(1));
    }
    let p = phi.kernel().p().value();
    let longest = (target / phi.bound()).powf(p);
    let steps = (longest / h_t * (1.0 + 1e-12)).floor() as usize;
    if steps == 0 {
        return Err(Error::StepTooLarge { h_t, target });
    }
    Ok(steps)
}

fn iterate_window(
    start: &GridFunction,
    phi: &BoundaryFunctional,
    ratio: usize,
    steps: usize,
    cfg: &PicardConfig,
) -> Result<(Vec<GridFunction>, WindowLog)> {
    let grid = *start.grid();
    let m = grid.last();
    let h_t = ratio as f64 * grid.step();
    let shifted: Vec<GridFunction> =
        (0..=steps).map(|l| crate::semigroup::shift::shift_steps(start, l * ratio)).collect();
    let mut current = shifted.clone();
    let mut increments = Vec::new();
    let mut converged = false;
    let starts = cfg.tracked.iter().map(|&n| grid.window_start(n)).collect::<Result<Vec<_>>>()?;
    for _ in 0..cfg.max_iter {
        let nodes = current.iter().map(|g| phi.apply_values(g.values())).collect();
        let trace = FunctionalTrace::from_nodes(nodes, ratio);
        let mut worst = vec![0.0f64; cfg.tracked.len()];
        let next: Vec<GridFunction> = shifted
            .iter()
            .enumerate()
            .map(|(l, base)| {
                let mut values = base.values().to_vec();
                let reach = (l * ratio).min(m + 1);
                for (i, v) in values.iter_mut().enumerate().skip(m + 1 - reach) {
                    *v = trace.at_step(i + l * ratio - m);
                }
                let diff: Vec<f64> = values.iter().zip(current[l].values()).map(|(a, b)| a - b).collect();
                let norms = crate::funcspace::nested_seminorms(&diff, &grid, start.p(), &starts);
                for (w, v) in worst.iter_mut().zip(norms) {
                    *w = w.max(v);
                }
                GridFunction::from_raw(grid, start.p(), values)
            })
            .collect();
        current = next;
        let done = worst.iter().all(|&v| v < cfg.tol);
        increments.push(worst);
        if done {
            converged = true;
            break;
        }
    }
    let k_eff = phi.effective_contraction(steps as f64 * h_t);
    Ok((current, WindowLog { start: 0.0, steps, k_eff, increments, converged }))
}

/// `S(t)` as an [`Evolution`]: Picard with `h_t = h_s`, so that every
/// evaluation is an exact characteristic value.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedSemigroup {
    pub phi: BoundaryFunctional,
    pub tol: f64,
    pub max_iter: usize,
}

impl PerturbedSemigroup {
    pub fn new(phi: BoundaryFunctional) -> Self {
        Self { phi, tol: 1e-13, max_iter: 500 }
    }
}

impl Evolution for PerturbedSemigroup {
    fn evolve(&self, t: f64, x: &GridFunction) -> Result<GridFunction> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        if t == 0.0 {
            return Ok(x.clone());
        }
        let mut cfg = PicardConfig::new(x.grid().step(), t).with_tol(self.tol);
        cfg.max_iter = self.max_iter;
        let out = picard_semigroup(x, &self.phi, &cfg)?;
        if !out.converged {
            return Err(Error::FixedPointDiverged { step: out.iterations });
        }
        Ok(out.path.into_frames().pop().expect("non-empty path"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid};
    use crate::semigroup::ShiftSemigroup;

    fn setup() -> (Grid, Exponent) {
        (Grid::new(1.0, 4.0, 1.0 / 64.0).unwrap(), Exponent::new(2.0).unwrap())
    }

    fn datum(g: Grid, p: Exponent) -> GridFunction {
        GridFunction::from_fn(g, p, |s| (2.0 * s).cos() + 0.3 * s).unwrap()
    }

    #[test]
    fn zero_kernel_reproduces_the_shift_in_one_iteration() {
        let (g, p) = setup();
        let phi = BoundaryFunctional::zero(g, p).unwrap();
        let x = datum(g, p);
        let out = picard_semigroup(&x, &phi, &PicardConfig::new(2.0 / 64.0, 1.0)).unwrap();
        assert_eq!(out.iterations, 1);
        let t = ShiftSemigroup::new(g);
        for l in 0..=out.path.steps() {
            assert_eq!(out.path.frame(l), &t.apply(out.path.time(l), &x).unwrap());
        }
    }

    #[test]
    fn zero_datum_stays_zero() {
        let (g, p) = setup();
        let phi = BoundaryFunctional::bump(g, p).unwrap();
        let out = picard_semigroup(&GridFunction::zeros(g, p), &phi, &PicardConfig::new(1.0 / 64.0, 1.0)).unwrap();
        assert!(out.path.frames().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn increments_contract_with_ratio_below_k_eff() {
        let (g, p) = setup();
        let phi = BoundaryFunctional::uniform(g, p).unwrap().scaled(0.8);
        let out = picard_semigroup(&datum(g, p), &phi, &PicardConfig::new(1.0 / 64.0, 0.75)).unwrap();
        assert!(out.converged);
        assert!(out.windows.len() > 1);
        for w in &out.windows {
            assert!(w.k_eff <= 0.5 + 1e-12);
            for pair in w.increments.windows(2) {
                if pair[0][0] > 1e-14 {
                    assert!(pair[1][0] <= w.k_eff * pair[0][0] * (1.0 + 1e-9), "{pair:?}");
                }
            }
        }
    }

    #[test]
    fn boundary_condition_holds_on_every_frame() {
        let (g, p) = setup();
        let phi = BoundaryFunctional::uniform(g, p).unwrap().scaled(0.5);
        let out = picard_semigroup(&datum(g, p), &phi, &PicardConfig::new(1.0 / 64.0, 1.0)).unwrap();
        for x in &out.path.frames()[1..] {
            assert!((x.at_boundary() - phi.apply(x).unwrap()).abs() < 1e-11);
        }
    }

    #[test]
    fn windows_compose_like_the_semigroup_law() {
        // with h_t = h_s the scheme is one-step, so splitting the horizon is exact
        let (g, p) = setup();
        let phi = BoundaryFunctional::bump(g, p).unwrap();
        let x = datum(g, p);
        let s = PerturbedSemigroup::new(phi);
        let direct = s.evolve(0.75, &x).unwrap();
        let composed = s.evolve(0.25, &s.evolve(0.5, &x).unwrap()).unwrap();
        assert!(direct.sub(&composed).unwrap().seminorm(2).unwrap() < 1e-11);
    }

    #[test]
    fn guards() {
        let (g, p) = setup();
        let phi = BoundaryFunctional::uniform(g, p).unwrap();
        let x = datum(g, p);
        assert!(picard_semigroup(&x, &phi, &PicardConfig::new(0.01, 1.0)).is_err());
        assert!(picard_semigroup(&x, &phi, &PicardConfig::new(1.0 / 64.0, 0.3)).is_err());
        // K = sqrt(2) * 40: windows would be shorter than one step
        let big = phi.scaled(40.0);
        assert!(matches!(
            picard_semigroup(&x, &big, &PicardConfig::new(1.0 / 32.0, 1.0)),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(PerturbedSemigroup::new(phi).evolve(-1.0, &x).is_err());
    }
}
