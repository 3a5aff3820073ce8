use super::generator::GeneratorSpec;
use super::shift::{shift_steps, ShiftSemigroup};
use super::Evolution;
use crate::error::{Error, Result};
use crate::funcspace::{Exponent, GridFunction};
use crate::report::CheckReport;

/// Relative tolerance for the algebraic semigroup laws of the exact shift.
pub const AXIOM_TOLERANCE: f64 = 1e-12;

/// Checks `T(0) = id` and `T(t + s) = T(t) T(s)` on every pair `(t, s)` drawn
/// from `times` with `t + s <= max(times)`.
///
/// One row per law and seminorm index, carrying the worst relative residual
/// `p_n(defect) / p_n(x)` over the test set; for the composition law `t` is
/// the `t + s` where the worst case occurred.
pub fn check_semigroup_axioms(
    semigroup: &ShiftSemigroup,
    times: &[f64],
    testset: &[GridFunction],
    indices: &[usize],
) -> Result<CheckReport> {
    let grid = *semigroup.grid();
    let steps = times.iter().map(|&t| grid.steps(t)).collect::<Result<Vec<_>>>()?;
    let horizon = steps.iter().copied().max().unwrap_or(0);
    let starts = indices.iter().map(|&n| grid.window_start(n)).collect::<Result<Vec<_>>>()?;

    let mut identity = vec![0.0f64; indices.len()];
    let mut composition = vec![(0.0f64, 0.0f64); indices.len()];
    let mut sums = vec![0.0; indices.len()];

    for x in testset {
        if *x.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let base = x.seminorms(indices)?;
        let id = semigroup.apply(0.0, x)?.sub(x)?.seminorms(indices)?;
        for k in 0..indices.len() {
            identity[k] = identity[k].max(relative(id[k], base[k]));
        }
        for &s in &steps {
            let ts = shift_steps(x, s);
            for &t in steps.iter().filter(|&&t| t + s <= horizon) {
                composition_defect(x.values(), ts.values(), t, s, x.p(), &starts, &mut sums);
                for k in 0..indices.len() {
                    let norm = x.p().root(grid.step() * sums[k].max(0.0));
                    let rel = relative(norm, base[k]);
                    if rel > composition[k].0 {
                        composition[k] = (rel, (t + s) as f64 * grid.step());
                    }
                }
            }
        }
    }

    let mut report = CheckReport::new("semigroup_axioms");
    for (k, &n) in indices.iter().enumerate() {
        report.push("identity", n, Some(0.0), identity[k], AXIOM_TOLERANCE);
        report.push("composition", n, Some(composition[k].1), composition[k].0, AXIOM_TOLERANCE);
    }
    Ok(report)
}

fn relative(defect: f64, scale: f64) -> f64 {
    if defect == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        defect / scale
    }
}

/// Trapezoid sums of `|T(t+s)x - T(t)T(s)x|^p` over each window, computed in a
/// single right-to-left pass without materialising either side.
fn composition_defect(
    x: &[f64],
    ts: &[f64],
    t: usize,
    s: usize,
    p: Exponent,
    starts: &[usize],
    sums: &mut [f64],
) {
    let last = x.len() - 1;
    let lowest = starts.iter().copied().min().unwrap_or(last);
    let at = |i: usize| {
        let direct = if i + t + s <= last { x[i + t + s] } else { 0.0 };
        let composed = if i + t <= last { ts[i + t] } else { 0.0 };
        direct - composed
    };
    let right = p.pow_abs(at(last));
    let mut acc = 0.0;
    for slot in sums.iter_mut() {
        *slot = 0.0;
    }
    for i in (lowest..=last).rev() {
        let v = p.pow_abs(at(i));
        acc += v;
        for (k, &start) in starts.iter().enumerate() {
            if start == i {
                sums[k] = if start == last { 0.0 } else { acc - 0.5 * v - 0.5 * right };
            }
        }
    }
}

/// Empirical equicontinuity constant on `[0, t0]`: the largest ratio
/// `p_n(T(t) x) / p_n(x)` over the test set (0/0 counts as 0), paired with the
/// index `q = n` of the dominating seminorm.
pub fn equicontinuity_constants(
    semigroup: &ShiftSemigroup,
    t0: f64,
    n: usize,
    testset: &[GridFunction],
) -> Result<(f64, usize)> {
    if testset.is_empty() {
        return Err(Error::EmptySamples);
    }
    let steps = semigroup.grid().steps(t0)?;
    let mut m = 0.0f64;
    for x in testset {
        let base = x.seminorm(n)?;
        for k in 0..=steps {
            let moved = semigroup.apply(k as f64 * semigroup.grid().step(), x)?.seminorm(n)?;
            m = m.max(relative(moved, base));
        }
    }
    Ok((m, n))
}

/// Largest possible `p_n(T(t) x) / p_n(x)` for the trapezoid seminorm:
/// `(1 + (h_s / 2) |x(b)|^p / p_n(x)^p)^{1/p}`.
///
/// The node `b` carries half weight, every node it can be shifted onto
/// carries full weight, so only `x(b)` can make the discrete ratio exceed 1.
pub fn shift_growth_bound(x: &GridFunction, n: usize) -> Result<f64> {
    let base = x.seminorm(n)?;
    if base == 0.0 {
        return Ok(1.0);
    }
    let p = x.p();
    let extra = 0.5 * x.grid().step() * p.pow_abs(x.at_boundary());
    Ok(p.root(1.0 + extra / p.pow_abs(base)))
}

/// `p_n(T(t) x - x)`.
pub fn strong_continuity_modulus(semigroup: &ShiftSemigroup, x: &GridFunction, t: f64, n: usize) -> Result<f64> {
    semigroup.apply(t, x)?.sub(x)?.seminorm(n)
}

/// `p_n((U(h) x - x) / h - G x)` for `x` in the generator's discrete domain.
pub fn generator_residual(
    evolution: &dyn Evolution,
    generator: &GeneratorSpec,
    x: &GridFunction,
    h: f64,
    n: usize,
) -> Result<f64> {
    let check = generator.contains(x);
    if !check.member {
        return Err(Error::OutsideDomain { what: "generator test datum".into(), residual: check.residual });
    }
    generator_defect(evolution, generator, x, h, n)
}

/// Same quantity as [`generator_residual`] without the domain guard; useful
/// for probing how data outside the domain behave.
pub fn generator_defect(
    evolution: &dyn Evolution,
    generator: &GeneratorSpec,
    x: &GridFunction,
    h: f64,
    n: usize,
) -> Result<f64> {
    if h <= 0.0 {
        return Err(Error::InvalidHorizon(h));
    }
    let quotient = evolution.evolve(h, x)?.combine(1.0 / h, x, -1.0 / h)?;
    quotient.sub(&generator.apply(x))?.seminorm(n)
}
