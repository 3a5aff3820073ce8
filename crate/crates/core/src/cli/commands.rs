use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::Setup;
use crate::error::{Error, Result};
use crate::evolve::{characteristics_oracle, compare_solutions, picard_semigroup, resolvent_crosscheck, PicardConfig};
use crate::funcspace::{io, GridFunction, TimePath};
use crate::perturbation::{estimate_contraction, DembartCheck, PerturbedResolvent, ShiftResolvent};
use crate::report::{observed_orders, CheckReport};
use crate::samples;
use crate::semigroup::{check_semigroup_axioms, equicontinuity_constants, shift_growth_bound, GeneratorSpec, ShiftSemigroup};

/// Whether every check of a command passed.
pub type Verdict = bool;

/// Relative tolerance for identities that hold exactly up to rounding.
const ROUNDING: f64 = 1e-12;

fn rng(setup: &Setup) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(setup.config.seed)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn prepare(setup: &Setup) -> Result<&Path> {
    let dir = setup.config.out.as_path();
    fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("output directory {} is not writable: {e}", dir.display())))?;
    Ok(dir)
}

fn write_report(dir: &Path, report: &CheckReport) -> Result<()> {
    report.write_csv(create(dir, &format!("{}.csv", report.suite))?)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut out = create(dir, name)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Runs the selected verification suites, one CSV per suite.
pub fn cmd_verify(setup: &Setup) -> Result<Verdict> {
    let dir = prepare(setup)?;
    let mut rng = rng(setup);
    let battery = samples::random_functions(setup.grid, setup.p, setup.config.samples, &mut rng)?;
    let mut all = true;
    for suite in &setup.config.suites {
        let report = match suite.as_str() {
            "seminorm" => seminorm_suite(setup, &battery)?,
            "axioms" => axiom_suite(setup, &battery)?,
            "equicontinuity" => equicontinuity_suite(setup, &battery)?,
            "dembart" => dembart_suite(setup)?,
            _ => contraction_suite(setup, &mut rng)?,
        };
        write_report(dir, &report)?;
        for row in report.failures() {
            eprintln!("{}: {} n={} residual {:e} > bound {:e}", report.suite, row.name, row.n, row.residual, row.bound);
        }
        all &= report.passed();
    }
    Ok(all)
}

fn seminorm_suite(setup: &Setup, battery: &[GridFunction]) -> Result<CheckReport> {
    let mut report = CheckReport::new("verify_seminorm");
    let max = setup.grid.max_index();
    for (x, y) in battery.iter().zip(battery.iter().cycle().skip(1)) {
        for n in 1..=max {
            let px = x.seminorm(n)?;
            let py = y.seminorm(n)?;
            let scale = ROUNDING * (px + py).max(f64::MIN_POSITIVE);
            if n < max {
                report.push("monotone", n, None, (px - x.seminorm(n + 1)?).max(0.0), scale);
            }
            report.push("homogeneous", n, None, (x.scaled(-2.5).seminorm(n)? - 2.5 * px).abs(), 2.5 * scale);
            report.push("triangle", n, None, (x.add(y)?.seminorm(n)? - px - py).max(0.0), scale);
        }
    }
    Ok(report)
}

fn axiom_suite(setup: &Setup, battery: &[GridFunction]) -> Result<CheckReport> {
    let shift = ShiftSemigroup::new(setup.grid);
    let step = setup.grid.step().max(1.0 / 64.0);
    let horizon = 2.0f64.min(setup.grid.left() + setup.grid.b());
    let count = (horizon / step).floor() as usize;
    let times: Vec<f64> = (0..=count).map(|k| k as f64 * step).collect();
    let mut report = check_semigroup_axioms(&shift, &times, battery, &setup.config.tracked)?;
    report.suite = "verify_axioms".into();
    Ok(report)
}

/// The measured `max p_n(T(t) x) / p_n(x)` against the sharp trapezoid
/// allowance: the half weight at `b` lets the ratio exceed 1 by
/// `(1 + (h_s / 2) |x(b)|^p / p_n(x)^p)^{1/p}`.
fn equicontinuity_suite(setup: &Setup, battery: &[GridFunction]) -> Result<CheckReport> {
    let shift = ShiftSemigroup::new(setup.grid);
    let mut report = CheckReport::new("verify_equicontinuity");
    for &n in &setup.config.tracked {
        let (m, _) = equicontinuity_constants(&shift, setup.config.t_final.min(setup.grid.b()), n, battery)?;
        let mut allowance = 1.0f64;
        for x in battery {
            allowance = allowance.max(shift_growth_bound(x, n)?);
        }
        report.push("equicontinuity", n, None, m, allowance * (1.0 + ROUNDING));
    }
    Ok(report)
}

fn dembart_suite(setup: &Setup) -> Result<CheckReport> {
    let mut report = CheckReport::new("verify_dembart");
    let check = DembartCheck::new(1).with_constant(setup.config.dembart_constant);
    let paths = (0..5)
        .map(|k| samples::compatible_path(setup.grid, setup.p, setup.config.t0, setup.h_t, k))
        .collect::<Result<Vec<_>>>()?;
    let mut unperturbed = check.run(&ShiftResolvent, &GeneratorSpec::unperturbed(), &paths)?;
    for row in &mut unperturbed.rows {
        row.name = format!("shift_{}", row.name);
    }
    report.extend(unperturbed);
    if !setup.phi.is_zero() {
        let paths = (0..3)
            .map(|k| {
                let x0 = samples::compatible_datum(&setup.phi, k)?;
                TimePath::separable(&x0, setup.config.t0, setup.h_t, |t| t * t)
            })
            .collect::<Result<Vec<_>>>()?;
        let resolvent = PerturbedResolvent::new(setup.phi.clone(), setup.neumann());
        let mut perturbed = check.run(&resolvent, &GeneratorSpec::perturbed(setup.phi.clone()), &paths)?;
        for row in &mut perturbed.rows {
            row.name = format!("neumann_{}", row.name);
        }
        report.extend(perturbed);
    }
    Ok(report)
}

fn contraction_suite(setup: &Setup, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut report = CheckReport::new("verify_contraction");
    let paths = (0..setup.config.samples)
        .map(|_| samples::random_path(setup.grid, setup.p, setup.config.t0, setup.h_t, rng))
        .collect::<Result<Vec<_>>>()?;
    for &n in &setup.config.tracked {
        let t = Some(setup.config.t0);
        match estimate_contraction(&setup.phi, setup.config.t0, &paths, n) {
            Ok(est) => report.push("contraction", n, t, est.ratio, est.bound * est.slack),
            Err(Error::ContractionBoundExceeded { ratio, bound }) => report.push("contraction", n, t, ratio, bound),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
struct LadderRow {
    level: usize,
    h_s: f64,
    h_t: f64,
    discrepancy: f64,
    order: Option<f64>,
}

/// Picard evolution against the characteristics oracle, optionally on a
/// ladder of halved steps.
pub fn cmd_evolve(setup: &Setup) -> Result<Verdict> {
    let dir = prepare(setup)?;
    let mut ladder = Vec::new();
    let mut verdict = true;
    for level in 0..=setup.config.refine {
        let run = setup.refined(level)?;
        let x0 = match run.config.datum.as_str() {
            "zero" => GridFunction::zeros(run.grid, run.p),
            _ => samples::random_smooth(run.grid, run.p, &mut rng(&run))?,
        };
        let cfg = PicardConfig::new(run.h_t, run.config.t_final)
            .with_tol(run.config.tol)
            .with_tracked(run.config.tracked.clone());
        let picard = picard_semigroup(&x0, &run.phi, &cfg)?;
        let oracle = characteristics_oracle(&x0, &run.phi, run.config.t_final, run.h_t)?;
        let mut cmp = compare_solutions(&picard.path, &oracle.u, &run.config.tracked, run.config.threshold)?;
        cmp.report.suite = "evolve_comparison".into();
        let discrepancy = cmp.max.iter().map(|(_, v)| *v).fold(0.0, f64::max);
        if level == 0 {
            io::write_frames(&picard.path, run.config.snapshot_stride, create(dir, "evolve_snapshots.csv")?)?;
            oracle.write_trace(create(dir, "evolve_trace.csv")?)?;
            write_report(dir, &cmp.report)?;
            write_json(dir, "evolve_windows.json", &picard.windows)?;
            verdict = cmp.report.passed() && picard.converged;
            if !picard.converged {
                eprintln!("picard iteration hit its iteration cap before reaching tol");
            }
        }
        ladder.push(LadderRow { level, h_s: run.grid.step(), h_t: run.h_t, discrepancy, order: None });
    }
    let errors: Vec<f64> = ladder.iter().map(|r| r.discrepancy).collect();
    for (row, order) in ladder.iter_mut().skip(1).zip(observed_orders(&errors)) {
        row.order = Some(order);
    }
    let mut w = csv::Writer::from_writer(create(dir, "evolve_convergence.csv")?);
    for row in &ladder {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(verdict)
}

#[derive(Debug, Serialize)]
struct RatioRow {
    term_index: usize,
    n: usize,
    ratio: f64,
    k_eff: f64,
}

/// Neumann series for a seeded random path, its per-term table and the
/// cross-check against the Picard route.
pub fn cmd_resolvent(setup: &Setup) -> Result<Verdict> {
    let dir = prepare(setup)?;
    let f = samples::random_path(setup.grid, setup.p, setup.config.t0, setup.h_t, &mut rng(setup))?;
    let allowance = setup.config.crosscheck_constant * setup.h_t;
    let check = resolvent_crosscheck(&f, &setup.phi, &setup.neumann(), allowance)?;
    let outcome = &check.neumann;
    outcome.write_csv(create(dir, "resolvent_terms.csv")?)?;
    let mut w = csv::Writer::from_writer(create(dir, "resolvent_ratios.csv")?);
    for &n in &setup.config.tracked {
        let inc = outcome.increments(n);
        for (k, pair) in inc.windows(2).enumerate() {
            if pair[0] > 0.0 {
                w.serialize(RatioRow { term_index: k + 1, n, ratio: pair[1] / pair[0], k_eff: outcome.k_eff })?;
            }
        }
    }
    w.flush()?;
    let mut report = check.report.clone();
    for term in &outcome.diagnostics {
        report.push("geometric_bound", term.n, None, term.increment, term.bound * (1.0 + ROUNDING));
    }
    write_report(dir, &report)?;
    for row in report.failures() {
        eprintln!("{} n={}: residual {:e} > bound {:e}", row.name, row.n, row.residual, row.bound);
    }
    Ok(report.passed())
}

/// Empirical `p_n(h) / p_n^inf(f)` over seeded random paths.
pub fn cmd_contraction(setup: &Setup) -> Result<Verdict> {
    let dir = prepare(setup)?;
    let mut rng = rng(setup);
    let paths = (0..setup.config.samples)
        .map(|_| samples::random_path(setup.grid, setup.p, setup.config.t0, setup.h_t, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(create(dir, "contraction.csv")?);
    let mut verdict = true;
    for &n in &setup.config.tracked {
        match estimate_contraction(&setup.phi, setup.config.t0, &paths, n) {
            Ok(est) => w.serialize(est)?,
            Err(Error::ContractionBoundExceeded { ratio, bound }) => {
                eprintln!("n={n}: ratio {ratio} exceeds {bound}");
                verdict = false;
            }
            Err(e) => return Err(e),
        }
    }
    w.flush()?;
    Ok(verdict)
}
