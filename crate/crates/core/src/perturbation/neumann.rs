use std::io::Write;

use serde::Serialize;

use super::functional::BoundaryFunctional;
use super::integrals::rbar_b;
use super::resolvent::{resolvent_path, Resolvent};
use crate::error::{Error, Result};
use crate::funcspace::TimePath;

/// Truncation policy for `R_C f = sum_n (R_bar B)^n R f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeumannConfig {
    /// Stop once every tracked `p_n^inf` of the latest term is below `tol`.
    pub tol: f64,
    pub max_terms: usize,
    pub tracked: Vec<usize>,
}

impl Default for NeumannConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_terms: 64, tracked: vec![1] }
    }
}

impl NeumannConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        if self.tracked.is_empty() {
            return Err(Error::Config("at least one seminorm index must be tracked".into()));
        }
        Ok(())
    }
}

/// One diagnostic row: `p_n^inf` of term `term_index` against its geometric
/// bound `K_eff^term_index p_n^inf(R f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeumannTerm {
    pub term_index: usize,
    pub n: usize,
    pub increment: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannOutcome {
    pub path: TimePath,
    /// Number of summed terms, `N + 1`.
    pub terms: usize,
    pub converged: bool,
    pub k_eff: f64,
    /// `(n, K_eff^{N+1} / (1 - K_eff) p_n^inf(R f))` per tracked index.
    pub error_bound: Vec<(usize, f64)>,
    pub diagnostics: Vec<NeumannTerm>,
}

impl NeumannOutcome {
    pub fn error_bound_for(&self, n: usize) -> Option<f64> {
        self.error_bound.iter().find(|(m, _)| *m == n).map(|(_, b)| *b)
    }

    /// Increments of consecutive terms for one index, in term order.
    pub fn increments(&self, n: usize) -> Vec<f64> {
        self.diagnostics.iter().filter(|d| d.n == n).map(|d| d.increment).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.diagnostics {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Partial sums of the Neumann series for the perturbed resolvent.
///
/// The horizon of `f` fixes `K_eff = t0^{1/p} K`; the call fails when
/// `K_eff >= 1`. Hitting `max_terms` is not an error: the outcome is returned
/// with `converged == false` and the geometric tail bound still reported.
pub fn neumann_resolvent(f: &TimePath, phi: &BoundaryFunctional, cfg: &NeumannConfig) -> Result<NeumannOutcome> {
    cfg.validate()?;
    phi.kernel().ensure_compatible(f.frame(0))?;
    let k_eff = phi.effective_contraction(f.t0());
    if k_eff >= 1.0 {
        return Err(Error::PerturbationTooLarge { k_eff });
    }
    let base = resolvent_path(f)?;
    let base_sup = tracked_sups(&base, &cfg.tracked)?;

    let mut diagnostics = Vec::new();
    let record = |diagnostics: &mut Vec<NeumannTerm>, index: usize, sups: &[f64]| {
        for ((&n, &inc), &rf) in cfg.tracked.iter().zip(sups).zip(&base_sup) {
            diagnostics.push(NeumannTerm { term_index: index, n, increment: inc, bound: k_eff.powi(index as i32) * rf });
        }
    };
    record(&mut diagnostics, 0, &base_sup);

    let mut sum = base.clone();
    let mut term = base;
    let mut last = 0;
    let mut converged = phi.is_zero() || base_sup.iter().all(|&v| v < cfg.tol);
    while !converged && last + 1 < cfg.max_terms {
        term = rbar_b(&term, phi)?;
        last += 1;
        let sups = tracked_sups(&term, &cfg.tracked)?;
        record(&mut diagnostics, last, &sups);
        sum = sum.add(&term)?;
        converged = sups.iter().all(|&v| v < cfg.tol);
    }

    let tail = k_eff.powi(last as i32 + 1) / (1.0 - k_eff);
    let error_bound = cfg.tracked.iter().zip(&base_sup).map(|(&n, &rf)| (n, tail * rf)).collect();
    Ok(NeumannOutcome { path: sum, terms: last + 1, converged, k_eff, error_bound, diagnostics })
}

fn tracked_sups(f: &TimePath, tracked: &[usize]) -> Result<Vec<f64>> {
    Ok(f.frame_seminorms(tracked)?
        .into_iter()
        .map(|norms| norms.into_iter().fold(0.0, f64::max))
        .collect())
}

/// `R_C` realized by the Neumann series.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedResolvent {
    pub phi: BoundaryFunctional,
    pub config: NeumannConfig,
}

impl PerturbedResolvent {
    pub fn new(phi: BoundaryFunctional, config: NeumannConfig) -> Self {
        Self { phi, config }
    }
}

impl Resolvent for PerturbedResolvent {
    fn resolve(&self, f: &TimePath) -> Result<TimePath> {
        Ok(neumann_resolvent(f, &self.phi, &self.config)?.path)
    }

    /// `1 / (1 - K_eff)` from summing the geometric bounds.
    fn continuity_constant(&self, t0: f64) -> f64 {
        1.0 / (1.0 - self.phi.effective_contraction(t0))
    }

    fn name(&self) -> &str {
        "neumann"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Exponent, Grid};
    use crate::samples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Grid, Exponent) {
        (Grid::new(1.0, 3.0, 1.0 / 128.0).unwrap(), Exponent::new(2.0).unwrap())
    }

    fn half_contraction(g: Grid, p: Exponent) -> BoundaryFunctional {
        // uniform kernel on [-1, 1]: K = sqrt(2), so t0 = 1/8 gives K_eff = 1/2
        BoundaryFunctional::uniform(g, p).unwrap()
    }

    #[test]
    fn zero_kernel_gives_the_resolvent_in_one_term() {
        let (g, p) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = samples::random_path(g, p, 0.5, 1.0 / 64.0, &mut rng).unwrap();
        let phi = BoundaryFunctional::zero(g, p).unwrap();
        let out = neumann_resolvent(&f, &phi, &NeumannConfig::default()).unwrap();
        assert_eq!(out.terms, 1);
        assert!(out.converged);
        let diff = out.path.sub(&resolvent_path(&f).unwrap()).unwrap();
        assert!(diff.frames().iter().all(|x| x.max_abs() <= 1e-12));
        assert_eq!(out.error_bound_for(1), Some(0.0));
    }

    #[test]
    fn zero_path_gives_zero() {
        let (g, p) = setup();
        let f = TimePath::zeros(g, p, 0.125, 1.0 / 128.0).unwrap();
        let out = neumann_resolvent(&f, &half_contraction(g, p), &NeumannConfig::default()).unwrap();
        assert!(out.path.frames().iter().all(|x| x.is_zero()));
        assert_eq!(out.terms, 1);
    }

    #[test]
    fn too_large_perturbation_is_rejected() {
        let (g, p) = setup();
        let f = TimePath::zeros(g, p, 0.5, 1.0 / 128.0).unwrap();
        let err = neumann_resolvent(&f, &half_contraction(g, p), &NeumannConfig::default()).unwrap_err();
        assert!(matches!(err, Error::PerturbationTooLarge { .. }));
        assert!(err.to_string().contains("perturbation too large for horizon"));
    }

    #[test]
    fn terms_decay_geometrically_and_tail_bound_holds() {
        let (g, p) = setup();
        let phi = half_contraction(g, p);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = samples::random_path(g, p, 0.125, 1.0 / 128.0, &mut rng).unwrap();
        let cfg = NeumannConfig { tol: 1e-30, max_terms: 8, tracked: vec![1, 2] };
        let short = neumann_resolvent(&f, &phi, &cfg).unwrap();
        assert!((short.k_eff - 0.5).abs() < 1e-12);
        assert!(!short.converged);
        for row in &short.diagnostics {
            assert!(row.increment <= row.bound * (1.0 + 1e-12), "{row:?}");
        }
        let long = neumann_resolvent(&f, &phi, &NeumannConfig { max_terms: 18, ..cfg.clone() }).unwrap();
        for n in [1, 2] {
            let gap = long.path.sub(&short.path).unwrap().sup_seminorm(n).unwrap();
            assert!(gap <= short.error_bound_for(n).unwrap());
        }
    }

    #[test]
    fn diagnostics_csv_has_fixed_header() {
        let (g, p) = setup();
        let f = TimePath::zeros(g, p, 0.125, 1.0 / 128.0).unwrap();
        let out = neumann_resolvent(&f, &half_contraction(g, p), &NeumannConfig::default()).unwrap();
        let mut buf = Vec::new();
        out.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("term_index,n,increment,bound\n"));
    }

    #[test]
    fn config_validation() {
        assert!(NeumannConfig { tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(NeumannConfig { max_terms: 0, ..Default::default() }.validate().is_err());
        assert!(NeumannConfig { tracked: vec![], ..Default::default() }.validate().is_err());
        assert!(NeumannConfig::default().validate().is_ok());
    }
}
