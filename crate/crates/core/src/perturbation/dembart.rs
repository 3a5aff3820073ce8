use super::resolvent::{generator_path, time_derivative, Resolvent};
use crate::error::{Error, Result};
use crate::funcspace::{GridFunction, TimePath};
use crate::report::CheckReport;
use crate::semigroup::GeneratorSpec;

/// Residuals of the four conditions characterizing a generalized resolvent:
///
/// * (i) `R (D - A) f = f`,
/// * (ii) `D R f = R D f`,
/// * (iii) `A R f = R A f`,
/// * (iv) `p^inf(R f) <= M p^1(f)`.
///
/// `D` is the second-order time difference and `A` the generator stencil
/// applied frame by frame. Rows (i)-(iii) pass when the residual is at most
/// `constant (h_t^2 + h_s) max(1, p_n^inf(f))`; row (iv) reports the smallest
/// `M` over the test paths against the resolvent's own constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DembartCheck {
    pub n: usize,
    pub constant: f64,
    /// Absolute floor for the discrete `f'(0) = 0` test.
    pub derivative_tol: f64,
}

impl DembartCheck {
    pub fn new(n: usize) -> Self {
        Self { n, constant: 10.0, derivative_tol: 1e-10 }
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn run(&self, resolvent: &dyn Resolvent, gen: &GeneratorSpec, testfns: &[TimePath]) -> Result<CheckReport> {
        if testfns.is_empty() {
            return Err(Error::EmptySamples);
        }
        let n = self.n;
        let mut report = CheckReport::new(format!("dembart/{}", resolvent.name()));
        let mut m_worst = 0.0f64;
        let mut m_bound = f64::INFINITY;
        for f in testfns {
            let df = self.domain_derivative(gen, f)?;
            let af = generator_path(gen, f)?;
            let rf = resolvent.resolve(f)?;
            let scale = f.sup_seminorm(n)?.max(1.0);
            let bound = self.constant * (f.step() * f.step() + f.grid().step()) * scale;

            let first = resolvent.resolve(&df.sub(&af)?)?.sub(f)?;
            report.push("dembart_i", n, None, first.sup_seminorm(n)?, bound);

            let mut drf = time_derivative(&rf)?.into_frames();
            drf[0] = GridFunction::zeros(*f.grid(), f.p());
            let drf = TimePath::new(f.step(), drf)?;
            let second = drf.sub(&resolvent.resolve(&df)?)?;
            report.push("dembart_ii", n, None, second.sup_seminorm(n)?, bound);

            let third = generator_path(gen, &rf)?.sub(&resolvent.resolve(&af)?)?;
            report.push("dembart_iii", n, None, third.sup_seminorm(n)?, bound);

            let l1 = f.l1_seminorm(n)?;
            if l1 > 0.0 {
                m_worst = m_worst.max(rf.sup_seminorm(n)? / l1);
            }
            m_bound = m_bound.min(resolvent.continuity_constant(f.t0()));
        }
        report.push("dembart_iv", n, None, m_worst, m_bound * (1.0 + 1e-12));
        Ok(report)
    }

    /// `D f` with frame 0 set to the domain value `f'(0) = 0`, after checking
    /// that `f` lies in the discrete domains of `D` and of the generator.
    ///
    /// The discrete `f'(0)` must be at most `max(derivative_tol, h_t p_n^inf(D f))`:
    /// a genuinely vanishing derivative leaves an `O(h_t^2)` remainder.
    fn domain_derivative(&self, gen: &GeneratorSpec, f: &TimePath) -> Result<TimePath> {
        f.ensure_starts_at_zero()?;
        for (l, frame) in f.frames().iter().enumerate() {
            let check = gen.contains(frame);
            if !check.member {
                return Err(Error::OutsideDomain { what: format!("generator domain at frame {l}"), residual: check.residual });
            }
        }
        let df = time_derivative(f)?;
        let at_zero = df.frame(0).seminorm(self.n)?;
        let allowed = self.derivative_tol.max(f.step() * df.sup_seminorm(self.n)?);
        if at_zero > allowed {
            return Err(Error::OutsideDomain { what: "time-derivative domain (f'(0) = 0)".into(), residual: at_zero });
        }
        let mut frames = df.into_frames();
        frames[0] = GridFunction::zeros(*f.grid(), f.p());
        TimePath::new(f.step(), frames)
    }
}

/// [`DembartCheck`] with the default constant.
pub fn dembart_check(
    resolvent: &dyn Resolvent,
    gen: &GeneratorSpec,
    testfns: &[TimePath],
    n: usize,
) -> Result<CheckReport> {
    DembartCheck::new(n).run(resolvent, gen, testfns)
}
