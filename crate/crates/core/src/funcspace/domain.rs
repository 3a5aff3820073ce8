use super::function::GridFunction;
use crate::perturbation::BoundaryFunctional;

/// Outcome of a discrete domain-membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    pub member: bool,
    /// Boundary defect: `|x(b)|` for `D(A)`, `|x(b) - Phi(x)|` for `D(C)`.
    pub residual: f64,
    /// Largest finite-difference quotient `|x_{i+1} - x_i| / h_s`.
    pub max_slope: f64,
}

/// Discrete surrogate for membership in `D(A)` and `D(C)`.
///
/// `W^{1,p}_loc` membership cannot be decided from samples; a bounded
/// difference quotient stands in for it, and the boundary condition is
/// checked to within `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPredicate {
    pub tol: f64,
    pub max_slope: f64,
}

impl Default for DomainPredicate {
    fn default() -> Self {
        Self { tol: 1e-10, max_slope: 1e3 }
    }
}

impl DomainPredicate {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn decide(&self, x: &GridFunction, residual: f64) -> DomainCheck {
        let max_slope = max_difference_quotient(x);
        DomainCheck {
            member: residual <= self.tol && max_slope <= self.max_slope,
            residual,
            max_slope,
        }
    }

    /// `x(b) = 0`.
    pub fn check_a(&self, x: &GridFunction) -> DomainCheck {
        self.decide(x, x.at_boundary().abs())
    }

    /// `x(b) = Phi(x)`. Grid mismatch with the kernel counts as non-membership.
    pub fn check_c(&self, x: &GridFunction, phi: &BoundaryFunctional) -> DomainCheck {
        match phi.apply(x) {
            Ok(v) => self.decide(x, (x.at_boundary() - v).abs()),
            Err(_) => DomainCheck { member: false, residual: f64::INFINITY, max_slope: f64::NAN },
        }
    }
}

fn max_difference_quotient(x: &GridFunction) -> f64 {
    let h = x.grid().step();
    x.values().windows(2).fold(0.0, |m, w| m.max((w[1] - w[0]).abs() / h))
}

pub fn in_domain_a(x: &GridFunction, tol: f64) -> DomainCheck {
    DomainPredicate::with_tol(tol).check_a(x)
}

pub fn in_domain_c(x: &GridFunction, phi: &BoundaryFunctional, tol: f64) -> DomainCheck {
    DomainPredicate::with_tol(tol).check_c(x, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid};

    fn setup() -> (Grid, Exponent) {
        (Grid::new(1.0, 4.0, 1.0 / 256.0).unwrap(), Exponent::new(2.0).unwrap())
    }

    #[test]
    fn membership_in_domain_of_a() {
        let (g, p) = setup();
        let b = g.b();
        let lin = GridFunction::from_fn(g, p, |s| b - s).unwrap();
        let check = in_domain_a(&lin, 1e-12);
        assert!(check.member);
        assert_eq!(check.residual, 0.0);

        let one = GridFunction::constant(g, p, 1.0).unwrap();
        let check = in_domain_a(&one, 1e-12);
        assert!(!check.member);
        assert_eq!(check.residual, 1.0);

        let sq = GridFunction::from_fn(g, p, |s| (b - s) * (b - s)).unwrap();
        assert!(in_domain_a(&sq, 1e-12).member);
    }

    #[test]
    fn steep_samples_fail_the_sobolev_proxy() {
        let (g, p) = setup();
        let jump = GridFunction::from_fn(g, p, |s| if s < 0.0 { 10.0 } else { 0.0 }).unwrap();
        let check = in_domain_a(&jump, 1e-12);
        assert_eq!(check.residual, 0.0);
        assert!(check.max_slope > 1e3);
        assert!(!check.member);
    }

    #[test]
    fn membership_in_domain_of_c() {
        let (g, p) = setup();
        let b = g.b();
        let zero = BoundaryFunctional::zero(g, p).unwrap();
        let lin = GridFunction::from_fn(g, p, |s| b - s).unwrap();
        assert!(in_domain_c(&lin, &zero, 1e-12).member);

        let phi = BoundaryFunctional::bump(g, p).unwrap();
        let z = GridFunction::zeros(g, p);
        let check = in_domain_c(&z, &phi, 1e-12);
        assert!(check.member);
        assert_eq!(check.residual, 0.0);

        // constants: member iff |c - c Phi(1)| <= tol, Phi(1) by independent quadrature
        let mass = fine_kernel_mass(b);
        let c = 0.75;
        let x = GridFunction::constant(g, p, c).unwrap();
        let check = in_domain_c(&x, &phi, 1e-12);
        assert!((check.residual - (c - c * mass).abs()).abs() < 1e-6);
        assert!(!check.member);
    }

    // Simpson on a much finer grid than the functional uses.
    fn fine_kernel_mass(b: f64) -> f64 {
        let n = 20_000;
        let h = (1.0 + b) / n as f64;
        let f = |s: f64| BoundaryFunctional::bump_profile(s, b);
        let mut acc = f(-1.0) + f(b);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(-1.0 + i as f64 * h);
        }
        acc * h / 3.0
    }
}
