use proptest::prelude::*;
use semiperturb::evolve::{characteristics_oracle, PerturbedSemigroup};
use semiperturb::perturbation::{neumann_resolvent, perturb_integral_h};
use semiperturb::semigroup::shift_growth_bound;
use semiperturb::{BoundaryFunctional, Evolution, Exponent, Grid, GridFunction, NeumannConfig, ShiftSemigroup, TimePath};

const H: f64 = 1.0 / 32.0;

fn grid() -> Grid {
    Grid::new(1.0, 3.0, H).unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, grid().len())
}

fn exponent() -> impl Strategy<Value = Exponent> {
    (1.1..4.0f64).prop_map(|p| Exponent::new(p).unwrap())
}

fn function(p: Exponent, v: Vec<f64>) -> GridFunction {
    GridFunction::new(grid(), p, v).unwrap()
}

/// `t^2 x + t y` sampled at `H`, starting at zero.
fn path(p: Exponent, x: &[f64], y: &[f64], t0: f64) -> TimePath {
    let g = grid();
    TimePath::from_fn(g, p, t0, H, |t, s| {
        let i = g.index_of(s).unwrap();
        t * t * x[i] + t * y[i]
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_composes_exactly(v in values(), p in exponent(), a in 0usize..64, b in 0usize..64) {
        let shift = ShiftSemigroup::new(grid());
        let x = function(p, v);
        let (t, s) = (a as f64 * H, b as f64 * H);
        let lhs = shift.apply(t + s, &x).unwrap();
        let rhs = shift.apply(t, &shift.apply(s, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs.values(), rhs.values());
    }

    #[test]
    fn seminorms_are_graded_homogeneous_and_subadditive(
        v in values(), w in values(), p in exponent(), alpha in -3.0..3.0f64,
    ) {
        let x = function(p, v);
        let y = function(p, w);
        for n in 1..=3 {
            let px = x.seminorm(n).unwrap();
            let py = y.seminorm(n).unwrap();
            let tol = 1e-12 * (1.0 + px + py);
            if n < 3 {
                prop_assert!(px <= x.seminorm(n + 1).unwrap() + tol);
            }
            prop_assert!((x.scaled(alpha).seminorm(n).unwrap() - alpha.abs() * px).abs() <= tol * (1.0 + alpha.abs()));
            prop_assert!(x.add(&y).unwrap().seminorm(n).unwrap() <= px + py + tol);
        }
    }

    #[test]
    fn shift_growth_never_beats_the_trapezoid_allowance(v in values(), p in exponent(), k in 0usize..130) {
        let shift = ShiftSemigroup::new(grid());
        let x = function(p, v);
        for n in 1..=3 {
            let before = x.seminorm(n).unwrap();
            let after = shift.apply(k as f64 * H, &x).unwrap().seminorm(n).unwrap();
            prop_assert!(after <= shift_growth_bound(&x, n).unwrap() * before * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn functional_obeys_hoelder(v in values(), kv in values(), p in exponent()) {
        let g = grid();
        let kernel = BoundaryFunctional::from_fn(g, p, |s| kv[g.index_of(s).unwrap()]).unwrap();
        let x = function(p, v);
        let lhs = kernel.apply(&x).unwrap().abs();
        prop_assert!(lhs <= kernel.bound() * x.seminorm(1).unwrap() * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn smoothing_integral_contracts(v in values(), w in values(), p in exponent(), steps in 1usize..32) {
        let phi = BoundaryFunctional::uniform(grid(), p).unwrap();
        let t0 = steps as f64 * H;
        let f = path(p, &v, &w, t0);
        let h = perturb_integral_h(&f, t0, &phi).unwrap();
        let bound = phi.effective_contraction(t0) * f.sup_seminorm(1).unwrap();
        for n in 1..=3 {
            prop_assert!(h.seminorm(n).unwrap() <= bound * (1.0 + 1e-10) + 1e-14);
        }
    }

    #[test]
    fn neumann_terms_stay_under_their_geometric_bounds(v in values(), w in values(), scale in 0.0..1.0f64) {
        let p = Exponent::new(2.0).unwrap();
        let phi = BoundaryFunctional::bump(grid(), p).unwrap().scaled(scale);
        let t0 = 0.25;
        let f = path(p, &v, &w, t0);
        let cfg = NeumannConfig { tol: 1e-12, max_terms: 40, tracked: vec![1, 2] };
        let out = neumann_resolvent(&f, &phi, &cfg).unwrap();
        prop_assert!(out.k_eff < 1.0);
        for term in &out.diagnostics {
            prop_assert!(term.increment <= term.bound * (1.0 + 1e-10) + 1e-300);
        }
    }
}

fn smooth(p: Exponent) -> GridFunction {
    GridFunction::from_fn(grid(), p, |s| (2.0 * s).sin() + 0.3 * s * s).unwrap()
}

#[test]
fn perturbed_evolution_is_a_semigroup_on_grid_times() {
    let p = Exponent::new(2.0).unwrap();
    let phi = BoundaryFunctional::bump(grid(), p).unwrap();
    let s = PerturbedSemigroup::new(phi);
    let x = smooth(p);
    for (a, b) in [(1usize, 1usize), (3, 5), (8, 8), (13, 20)] {
        let (t, u) = (a as f64 * H, b as f64 * H);
        let once = s.evolve(t + u, &x).unwrap();
        let twice = s.evolve(t, &s.evolve(u, &x).unwrap()).unwrap();
        let gap = once.sub(&twice).unwrap().seminorm(3).unwrap();
        assert!(gap <= 1e-10 * (1.0 + x.seminorm(3).unwrap()), "{a} {b}: {gap:e}");
    }
}

#[test]
fn oracle_trace_is_the_functional_of_its_own_solution() {
    let p = Exponent::new(2.0).unwrap();
    let phi = BoundaryFunctional::bump(grid(), p).unwrap();
    let sol = characteristics_oracle(&smooth(p), &phi, 1.0, H).unwrap();
    for l in 1..=sol.u.steps() {
        let frame = sol.u.frame(l);
        assert!((frame.at_boundary() - phi.apply(frame).unwrap()).abs() <= 1e-10, "step {l}");
    }
    assert!(sol.fixed_point_residual <= 1e-10);
}

#[test]
fn evolution_is_linear() {
    let p = Exponent::new(2.0).unwrap();
    let phi = BoundaryFunctional::uniform(grid(), p).unwrap().scaled(0.5);
    let s = PerturbedSemigroup::new(phi);
    let x = smooth(p);
    let y = GridFunction::from_fn(grid(), p, |s| (s - 0.2).cos()).unwrap();
    let t = 0.75;
    let lhs = s.evolve(t, &x.combine(2.0, &y, -3.0).unwrap()).unwrap();
    let rhs = s.evolve(t, &x).unwrap().combine(2.0, &s.evolve(t, &y).unwrap(), -3.0).unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-9);
}
