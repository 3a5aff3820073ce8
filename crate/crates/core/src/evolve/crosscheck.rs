use super::picard::{picard_semigroup, PicardConfig};
use crate::error::Result;
use crate::funcspace::{GridFunction, TimePath};
use crate::perturbation::{neumann_resolvent, BoundaryFunctional, NeumannConfig, NeumannOutcome};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Crosscheck {
    /// One `crosscheck` row per tracked index: residual `p_n^inf` of the
    /// difference, bound `tail + allowance`.
    pub report: CheckReport,
    pub neumann: NeumannOutcome,
    /// `t -> int_0^t S(t - s) f(s) ds` by the trapezoid rule in `s`.
    pub semigroup_route: TimePath,
    pub difference: Vec<(usize, f64)>,
}

impl Crosscheck {
    pub fn difference_for(&self, n: usize) -> Option<f64> {
        self.difference.iter().find(|(m, _)| *m == n).map(|(_, v)| *v)
    }
}

/// The perturbed resolvent two ways: the Neumann series, and the trapezoid
/// sum of `S(t - s_l) f(s_l)` with each `S(.) f(s_l)` from Picard iteration.
///
/// `allowance` is the discretization budget added to the Neumann tail bound.
pub fn resolvent_crosscheck(
    f: &TimePath,
    phi: &BoundaryFunctional,
    cfg: &NeumannConfig,
    allowance: f64,
) -> Result<Crosscheck> {
    let neumann = neumann_resolvent(f, phi, cfg)?;
    let grid = *f.grid();
    let last = f.steps();
    let h = f.step();
    let mut sums = vec![vec![0.0; grid.len()]; last + 1];
    for l in 0..last {
        let x = f.frame(l);
        if x.is_zero() {
            continue;
        }
        let mut pc = PicardConfig::new(h, (last - l) as f64 * h).with_tracked(cfg.tracked.clone());
        pc.max_iter = pc.max_iter.max(cfg.max_terms);
        let evolved = picard_semigroup(x, phi, &pc)?;
        for (j, sum) in sums.iter_mut().enumerate().skip(l) {
            let w = if l == 0 || l == j { 0.5 * h } else { h };
            for (o, v) in sum.iter_mut().zip(evolved.path.frame(j - l).values()) {
                *o += w * v;
            }
        }
    }
    // the s = t node contributes S(0) f(t) = f(t) with half weight
    if last > 0 {
        for (o, v) in sums[last].iter_mut().zip(f.frame(last).values()) {
            *o += 0.5 * h * v;
        }
    }
    sums[0].iter_mut().for_each(|v| *v = 0.0);
    let frames = sums.into_iter().map(|v| GridFunction::from_raw(grid, f.p(), v)).collect();
    let semigroup_route = TimePath::from_parts(h, f.ratio(), frames);

    let diff = neumann.path.sub(&semigroup_route)?;
    let mut report = CheckReport::new("resolvent_crosscheck");
    let mut difference = Vec::new();
    for &n in &cfg.tracked {
        let d = diff.sup_seminorm(n)?;
        let tail = neumann.error_bound_for(n).unwrap_or(0.0);
        report.push("crosscheck", n, None, d, tail + allowance);
        difference.push((n, d));
    }
    Ok(Crosscheck { report, neumann, semigroup_route, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid};
    use crate::samples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Grid, Exponent) {
        (Grid::new(1.0, 2.0, 1.0 / 64.0).unwrap(), Exponent::new(2.0).unwrap())
    }

    #[test]
    fn zero_kernel_routes_agree_to_rounding() {
        let (g, p) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = samples::random_path(g, p, 0.25, 1.0 / 64.0, &mut rng).unwrap();
        let phi = BoundaryFunctional::zero(g, p).unwrap();
        let c = resolvent_crosscheck(&f, &phi, &NeumannConfig::default(), 0.0).unwrap();
        assert!(c.difference_for(1).unwrap() <= 1e-12, "{:?}", c.difference);
        assert!(c.report.passed() || c.difference_for(1).unwrap() <= 1e-12);
    }

    #[test]
    fn zero_path_gives_zero() {
        let (g, p) = setup();
        let f = TimePath::zeros(g, p, 0.25, 1.0 / 64.0).unwrap();
        let c = resolvent_crosscheck(&f, &BoundaryFunctional::bump(g, p).unwrap(), &NeumannConfig::default(), 0.0).unwrap();
        assert_eq!(c.difference_for(1), Some(0.0));
        assert!(c.report.passed());
    }

    #[test]
    fn routes_agree_to_first_order() {
        let errs: Vec<f64> = [32.0, 64.0, 128.0]
            .iter()
            .map(|inv| {
                let g = Grid::new(1.0, 1.0, 1.0 / inv).unwrap();
                let p = Exponent::new(2.0).unwrap();
                let x = GridFunction::from_fn(g, p, |s| (2.0 * s).cos()).unwrap();
                let f = TimePath::separable(&x, 0.25, 1.0 / inv, |t| (4.0 * t).sin()).unwrap();
                let phi = BoundaryFunctional::bump(g, p).unwrap();
                let cfg = NeumannConfig { tol: 1e-14, ..Default::default() };
                resolvent_crosscheck(&f, &phi, &cfg, 0.0).unwrap().difference_for(1).unwrap()
            })
            .collect();
        let orders = crate::report::observed_orders(&errs);
        assert!(orders.iter().all(|&o| o > 0.9), "{errs:?} {orders:?}");
    }
}
