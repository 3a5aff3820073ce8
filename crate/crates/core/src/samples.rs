//! Deterministic sample generators for tests, checks and the CLI batteries.

use rand::Rng;

use crate::error::{Error, Result};
use crate::funcspace::{Exponent, Grid, GridFunction, TimePath};
use crate::perturbation::BoundaryFunctional;
use crate::semigroup::GeneratorSpec;

/// A random trigonometric sum `c + sum_k a_k sin(w_k s + phi_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    offset: f64,
    terms: Vec<(f64, f64, f64)>,
}

impl Profile {
    pub fn eval(&self, s: f64) -> f64 {
        self.terms.iter().fold(self.offset, |acc, &(a, w, phase)| acc + a * (w * s + phase).sin())
    }
}

pub fn random_profile<R: Rng + ?Sized>(rng: &mut R) -> Profile {
    let count = rng.gen_range(2..=5);
    let terms = (0..count)
        .map(|k| {
            let a = rng.gen_range(-1.0..1.0) / (k + 1) as f64;
            (a, rng.gen_range(0.5..6.0), rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    Profile { offset: rng.gen_range(-0.5..0.5), terms }
}

pub fn random_smooth<R: Rng + ?Sized>(grid: Grid, p: Exponent, rng: &mut R) -> Result<GridFunction> {
    let profile = random_profile(rng);
    GridFunction::from_fn(grid, p, |s| profile.eval(s))
}

/// Continuous, piecewise linear with random values at nodes spaced 1/4 apart.
pub fn random_piecewise_linear<R: Rng + ?Sized>(grid: Grid, p: Exponent, rng: &mut R) -> Result<GridFunction> {
    let spacing = 0.25;
    let left = -grid.left();
    let count = ((grid.b() - left) / spacing).ceil() as usize + 1;
    let nodes: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridFunction::from_fn(grid, p, |s| {
        let u = (s - left) / spacing;
        let k = (u.floor() as usize).min(count - 2);
        let w = u - k as f64;
        (1.0 - w) * nodes[k] + w * nodes[k + 1]
    })
}

/// Alternating smooth and piecewise-linear functions.
pub fn random_functions<R: Rng + ?Sized>(grid: Grid, p: Exponent, count: usize, rng: &mut R) -> Result<Vec<GridFunction>> {
    (0..count)
        .map(|k| if k % 2 == 0 { random_smooth(grid, p, rng) } else { random_piecewise_linear(grid, p, rng) })
        .collect()
}

/// A random path starting at zero:
/// `f(t) = sin(w_1 t) x_1 + (t / t0) x_2 + sin^2(w_3 t) x_3`.
pub fn random_path<R: Rng + ?Sized>(grid: Grid, p: Exponent, t0: f64, step: f64, rng: &mut R) -> Result<TimePath> {
    let xs = random_functions(grid, p, 3, rng)?;
    let w1 = rng.gen_range(0.5..8.0);
    let w3 = rng.gen_range(0.5..8.0);
    let scale = if t0 > 0.0 { 1.0 / t0 } else { 0.0 };
    TimePath::from_fn(grid, p, t0, step, |t, s| {
        let i = grid.index_of(s).unwrap_or(0);
        (w1 * t).sin() * xs[0].values()[i]
            + t * scale * xs[1].values()[i]
            + (w3 * t).sin().powi(2) * xs[2].values()[i]
    })
}

/// The `k`-th (mod 5) smooth separable path `phi(t) psi(sigma)` with
/// `phi(0) = phi'(0) = 0` and `psi` vanishing to third order at `b`: every
/// frame lies in `D(A)` and `f` in the domain of the time derivative.
pub fn compatible_path(grid: Grid, p: Exponent, t0: f64, step: f64, k: usize) -> Result<TimePath> {
    let b = grid.b();
    let k = k % 5;
    let phi = move |t: f64| match k {
        0 => t * t,
        1 => t * t * t.cos(),
        2 => (2.0 * t).sin().powi(2),
        3 => t * t * t + t * t,
        _ => t * t * (-t).exp(),
    };
    let c = 0.25 * k as f64 - 0.5;
    let psi = move |s: f64| (b - s).powi(3) * (-(s - c) * (s - c)).exp() * (1.0 + 0.2 * k as f64 * s);
    TimePath::from_fn(grid, p, t0, step, |t, s| phi(t) * psi(s))
}

/// A hand-built `x0` with `x0(b) = Phi(x0)` and `(C x0)(b) = Phi(C x0)`,
/// both exact up to rounding on the grid, so that `x0` and its discrete
/// derivative lie in `D(C)`.
///
/// `x0 = base_k + alpha + beta (s - b)`, with `alpha, beta` from a triangular
/// 2x2 solve. Fails if `Phi(1) = 1`.
pub fn compatible_datum(phi: &BoundaryFunctional, k: usize) -> Result<GridFunction> {
    let grid = *phi.grid();
    let p = phi.kernel().p();
    let b = grid.b();
    let base = GridFunction::from_fn(grid, p, |s| match k % 3 {
        0 => (2.0 * s).sin() * (-s * s).exp(),
        1 => (3.0 * s).cos() / (1.0 + s * s),
        _ => 0.5 * (s - 0.3).powi(2) + 0.25 * (1.5 * s).sin(),
    })?;
    let ramp = GridFunction::from_fn(grid, p, |s| s - b)?;
    let gen = GeneratorSpec::perturbed(phi.clone());
    let defect = |x: &GridFunction| -> Result<(f64, f64)> {
        let dx = gen.apply(x);
        Ok((x.at_boundary() - phi.apply(x)?, dx.at_boundary() - phi.apply(&dx)?))
    };
    let diag = 1.0 - phi.apply(&GridFunction::constant(grid, p, 1.0)?)?;
    if diag.abs() < 1e-8 {
        return Err(Error::Config("kernel with Phi(1) = 1 admits no constant correction".into()));
    }
    let (l1_base, l2_base) = defect(&base)?;
    let (l1_ramp, _) = defect(&ramp)?;
    // defect(1) = (diag, 0), defect(ramp) = (l1_ramp, diag)
    let beta = -l2_base / diag;
    let alpha = -(l1_base + beta * l1_ramp) / diag;
    let mut x = base;
    x.add_scaled(beta, &ramp)?;
    let values = x.values().iter().map(|v| v + alpha).collect();
    GridFunction::new(grid, p, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::in_domain_c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Grid, Exponent) {
        (Grid::new(1.0, 4.0, 1.0 / 256.0).unwrap(), Exponent::new(2.0).unwrap())
    }

    #[test]
    fn generators_are_deterministic() {
        let (g, p) = setup();
        let a = random_path(g, p, 0.5, 1.0 / 128.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_path(g, p, 0.5, 1.0 / 128.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.frame(0).is_zero());
    }

    #[test]
    fn piecewise_linear_is_continuous() {
        let (g, p) = setup();
        let x = random_piecewise_linear(g, p, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let jump = x.values().windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        assert!(jump <= 2.0 * 4.0 * g.step() + 1e-12);
    }

    #[test]
    fn compatible_paths_vanish_at_zero_and_at_b() {
        let (g, p) = setup();
        for k in 0..5 {
            let f = compatible_path(g, p, 0.5, 1.0 / 32.0, k).unwrap();
            assert!(f.frame(0).is_zero());
            assert!(f.frames().iter().all(|x| x.at_boundary().abs() < 1e-15));
        }
    }

    #[test]
    fn compatible_datum_satisfies_both_conditions() {
        let (g, p) = setup();
        for phi in [BoundaryFunctional::bump(g, p).unwrap(), BoundaryFunctional::uniform(g, p).unwrap().scaled(0.3)] {
            let gen = GeneratorSpec::perturbed(phi.clone());
            for k in 0..3 {
                let x = compatible_datum(&phi, k).unwrap();
                assert!(in_domain_c(&x, &phi, 1e-12).member);
                assert!(in_domain_c(&gen.apply(&x), &phi, 1e-12).member);
            }
        }
    }
}
