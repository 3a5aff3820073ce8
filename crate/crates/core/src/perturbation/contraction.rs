use serde::Serialize;

use super::functional::BoundaryFunctional;
use super::integrals::perturb_integral_h;
use crate::error::{Error, Result};
use crate::funcspace::{Grid, TimePath};

/// Empirical `max p_n(h) / p_n^inf(f)` over a sample set, next to the
/// analytic bound `t0^{1/p} K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionEstimate {
    pub t0: f64,
    pub n: usize,
    pub ratio: f64,
    pub bound: f64,
    /// Multiplicative allowance for the cut node at `b - t0`.
    pub slack: f64,
    /// Samples with `p_n^inf(f) > 0`.
    pub used: usize,
}

/// `(1 + h_s / (2 t0))^{1/p}`.
///
/// The trapezoid weights of the nodes in `[b - t0, b]` add up to
/// `t0 + h_s / 2`, so a path with `f(0) != 0` can exceed `t0^{1/p} K p_1^inf`
/// by at most this factor. Paths that start at zero need no slack.
pub fn quadrature_slack(grid: &Grid, p: f64, t0: f64) -> f64 {
    (1.0 + grid.step() / (2.0 * t0)).powf(1.0 / p)
}

/// Runs the smoothing integral over horizon `t0` on every sample and returns
/// the worst ratio. Errors if it beats the bound by more than the quadrature
/// slack.
///
/// The denominator is the sup over the whole sample path, not just over
/// `[0, t0]`, so the estimate is non-decreasing in `t0` for a fixed sample
/// set. Requires `n >= 1`, since the bound is stated in `p_1 <= p_n`.
pub fn estimate_contraction(
    phi: &BoundaryFunctional,
    t0: f64,
    samples: &[TimePath],
    n: usize,
) -> Result<ContractionEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if n == 0 {
        return Err(Error::Config("contraction estimate needs a seminorm index n >= 1".into()));
    }
    let grid = *phi.grid();
    let p = phi.kernel().p().value();
    let bound = phi.effective_contraction(t0);
    let slack = quadrature_slack(&grid, p, t0);
    let mut ratio = 0.0f64;
    let mut used = 0;
    for f in samples {
        let denom = f.sup_seminorm(n)?;
        let h = perturb_integral_h(f, t0, phi)?;
        if denom > 0.0 {
            ratio = ratio.max(h.seminorm(n)? / denom);
            used += 1;
        }
    }
    if ratio > bound * slack * (1.0 + 1e-12) {
        return Err(Error::ContractionBoundExceeded { ratio, bound: bound * slack });
    }
    Ok(ContractionEstimate { t0, n, ratio, bound, slack, used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, GridFunction};
    use crate::samples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn batch(g: Grid, p: Exponent, seed: u64) -> Vec<TimePath> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..12).map(|_| samples::random_path(g, p, 1.0, 1.0 / 128.0, &mut rng).unwrap()).collect()
    }

    #[test]
    fn zero_kernel_gives_zero() {
        let g = Grid::new(1.0, 2.0, 1.0 / 128.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::zero(g, p).unwrap();
        let est = estimate_contraction(&phi, 0.5, &batch(g, p, 1), 1).unwrap();
        assert_eq!(est.ratio, 0.0);
    }

    #[test]
    fn uniform_kernel_stays_under_holder_constant() {
        for pv in [1.5, 2.0, 4.0] {
            let g = Grid::new(1.0, 2.0, 1.0 / 128.0).unwrap();
            let p = Exponent::new(pv).unwrap();
            let phi = BoundaryFunctional::uniform(g, p).unwrap();
            // K = (1 + b)^{1/q} for the indicator of [-1, b]
            let k = 2f64.powf(1.0 / p.conjugate().value());
            assert!((phi.bound() - k).abs() < 1e-12);
            let est = estimate_contraction(&phi, 0.25, &batch(g, p, 2), 2).unwrap();
            assert!(est.ratio <= 0.25f64.powf(1.0 / pv) * k);
        }
    }

    #[test]
    fn halving_the_horizon_respects_the_smaller_bound() {
        let g = Grid::new(1.0, 2.0, 1.0 / 128.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::bump(g, p).unwrap();
        let set = batch(g, p, 3);
        let full = estimate_contraction(&phi, 0.5, &set, 1).unwrap();
        let half = estimate_contraction(&phi, 0.25, &set, 1).unwrap();
        assert!((half.bound / full.bound - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(half.ratio <= half.bound);
        assert!(half.ratio <= full.ratio);
    }

    #[test]
    fn estimate_is_monotone_in_the_horizon() {
        let g = Grid::new(1.0, 2.0, 1.0 / 128.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::uniform(g, p).unwrap();
        let set = batch(g, p, 4);
        let ratios: Vec<f64> = [0.125, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&t0| estimate_contraction(&phi, t0, &set, 1).unwrap().ratio)
            .collect();
        assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
    }

    #[test]
    fn paths_not_starting_at_zero_fit_within_the_slack() {
        let g = Grid::new(1.0, 2.0, 1.0 / 64.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::uniform(g, p).unwrap();
        let x = GridFunction::constant(g, p, 1.0).unwrap();
        let f = TimePath::constant(&x, 0.25, 1.0 / 64.0).unwrap();
        let est = estimate_contraction(&phi, 0.25, &[f], 1).unwrap();
        // constant path: ratio = (t0 + h_s / 2)^{1/2} K, exactly the slack
        assert!(est.ratio > est.bound);
        assert!((est.ratio - est.bound * est.slack).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        let g = Grid::new(1.0, 2.0, 1.0 / 64.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::uniform(g, p).unwrap();
        assert!(matches!(estimate_contraction(&phi, 0.25, &[], 1), Err(Error::EmptySamples)));
        let f = TimePath::zeros(g, p, 0.25, 1.0 / 64.0).unwrap();
        assert!(estimate_contraction(&phi, 0.25, std::slice::from_ref(&f), 0).is_err());
        assert_eq!(estimate_contraction(&phi, 0.25, &[f], 1).unwrap().used, 0);
    }
}
