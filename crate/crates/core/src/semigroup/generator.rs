use crate::funcspace::{DomainCheck, DomainPredicate, GridFunction};
use crate::perturbation::BoundaryFunctional;

/// `A` (boundary condition `x(b) = 0`) or `C` (`x(b) = Phi(x)`); both act as
/// the derivative `x'`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Unperturbed,
    Perturbed(BoundaryFunctional),
}

/// Discrete derivative used for `x'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// `(x_{i+1} - x_i) / h_s`, backward difference in the last row. On the
    /// grid this is exactly `(T(h_s) x - x) / h_s` away from `b`.
    #[default]
    Forward,
    /// Second-order centred differences with one-sided second-order rows at
    /// both ends.
    Centered,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub stencil: Stencil,
    pub predicate: DomainPredicate,
}

impl GeneratorSpec {
    pub fn unperturbed() -> Self {
        Self { kind: GeneratorKind::Unperturbed, stencil: Stencil::Forward, predicate: DomainPredicate::default() }
    }

    pub fn perturbed(phi: BoundaryFunctional) -> Self {
        Self { kind: GeneratorKind::Perturbed(phi), ..Self::unperturbed() }
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn with_predicate(mut self, predicate: DomainPredicate) -> Self {
        self.predicate = predicate;
        self
    }

    pub fn functional(&self) -> Option<&BoundaryFunctional> {
        match &self.kind {
            GeneratorKind::Unperturbed => None,
            GeneratorKind::Perturbed(phi) => Some(phi),
        }
    }

    pub fn contains(&self, x: &GridFunction) -> DomainCheck {
        match &self.kind {
            GeneratorKind::Unperturbed => self.predicate.check_a(x),
            GeneratorKind::Perturbed(phi) => self.predicate.check_c(x, phi),
        }
    }

    /// The stencil applied to `x`; the domain is not checked here.
    pub fn apply(&self, x: &GridFunction) -> GridFunction {
        let v = x.values();
        let h = x.grid().step();
        let m = v.len() - 1;
        let mut out = vec![0.0; v.len()];
        match self.stencil {
            Stencil::Forward => {
                for i in 0..m {
                    out[i] = (v[i + 1] - v[i]) / h;
                }
                out[m] = (v[m] - v[m - 1]) / h;
            }
            Stencil::Centered => {
                for i in 1..m {
                    out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
                }
                out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
                out[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
            }
        }
        GridFunction::from_raw(*x.grid(), x.p(), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid};

    #[test]
    fn stencils_differentiate_polynomials() {
        let g = Grid::new(1.0, 4.0, 1.0 / 64.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let lin = GridFunction::from_fn(g, p, |s| 3.0 * s - 1.0).unwrap();
        let fwd = GeneratorSpec::unperturbed().apply(&lin);
        assert!(fwd.values().iter().all(|v| (v - 3.0).abs() < 1e-11));

        let quad = GridFunction::from_fn(g, p, |s| s * s).unwrap();
        let cen = GeneratorSpec::unperturbed().with_stencil(Stencil::Centered).apply(&quad);
        for (s, v) in g.points().zip(cen.values()) {
            assert!((v - 2.0 * s).abs() < 1e-10);
        }
    }

    #[test]
    fn kind_selects_the_boundary_condition() {
        let g = Grid::new(1.0, 2.0, 1.0 / 64.0).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let one = GridFunction::constant(g, p, 1.0).unwrap();
        assert!(!GeneratorSpec::unperturbed().contains(&one).member);
        // uniform kernel on [-1, 1] with weight 1/2 makes Phi(1) = 1
        let phi = BoundaryFunctional::uniform(g, p).unwrap().scaled(0.5);
        let c = GeneratorSpec::perturbed(phi);
        assert!(c.contains(&one).member);
        assert!(c.functional().is_some());
    }
}
