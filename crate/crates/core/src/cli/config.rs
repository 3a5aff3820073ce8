use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{aligned_steps, Exponent, Grid};
use crate::perturbation::{BoundaryFunctional, NeumannConfig};

/// A step size written either as a number or as a fraction `"1/256"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Step {
    Value(f64),
    Text(#[serde(with = "fraction")] f64),
}

impl Step {
    pub fn value(self) -> f64 {
        match self {
            Step::Value(v) | Step::Text(v) => v,
        }
    }
}

mod fraction {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(*v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_fraction(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn parse_fraction(text: &str) -> std::result::Result<f64, String> {
    let bad = || format!("cannot read {text:?} as a number or fraction");
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            Ok(num / den)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

pub const SUITES: [&str; 5] = ["seminorm", "axioms", "equicontinuity", "dembart", "contraction"];

/// Everything a batch run needs. Every field has a default, so an empty file
/// is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub b: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub h_s: Step,
    pub p: f64,
    /// Defaults to `h_s`.
    pub h_t: Option<Step>,
    /// `zero`, `uniform`, `bump`, or a path to an `s,value` CSV file.
    pub kernel: String,
    pub kernel_scale: f64,
    pub t0: f64,
    pub t_final: f64,
    pub tol: f64,
    pub max_terms: usize,
    pub tracked: Vec<usize>,
    pub suites: Vec<String>,
    pub out: PathBuf,
    pub seed: u64,
    /// Size of the random batteries.
    pub samples: usize,
    /// Largest admissible picard/oracle discrepancy for `evolve`.
    pub threshold: f64,
    /// Number of halvings of `(h_s, h_t)` for the `evolve` ladder.
    pub refine: usize,
    /// `smooth` or `zero`.
    pub datum: String,
    pub snapshot_stride: usize,
    /// Constant `C` in the `C (h_t^2 + h_s)` budget of the Dembart suite.
    pub dembart_constant: f64,
    /// Constant `C` in the `C h_t` discretization budget of the resolvent
    /// cross-check.
    pub crosscheck_constant: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            b: 1.0,
            l: 4.0,
            h_s: Step::Value(1.0 / 256.0),
            p: 2.0,
            h_t: None,
            kernel: "bump".into(),
            kernel_scale: 1.0,
            t0: 0.125,
            t_final: 1.0,
            tol: 1e-10,
            max_terms: 64,
            tracked: vec![1, 2, 3],
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            out: PathBuf::from("out"),
            seed: 0,
            samples: 20,
            threshold: 1e-6,
            refine: 0,
            datum: "smooth".into(),
            snapshot_stride: 16,
            dembart_constant: 10.0,
            crosscheck_constant: 1.0,
        }
    }
}

/// A validated configuration with the grid and kernel built.
#[derive(Debug, Clone)]
pub struct Setup {
    pub config: RunConfig,
    pub grid: Grid,
    pub p: Exponent,
    pub h_t: f64,
    pub phi: BoundaryFunctional,
}

impl Setup {
    pub fn neumann(&self) -> NeumannConfig {
        NeumannConfig { tol: self.config.tol, max_terms: self.config.max_terms, tracked: self.config.tracked.clone() }
    }

    /// The same experiment with `h_s` and `h_t` divided by `2^level`.
    pub fn refined(&self, level: usize) -> Result<Setup> {
        let factor = f64::powi(2.0, level as i32);
        let mut config = self.config.clone();
        config.h_s = Step::Value(self.grid.step() / factor);
        config.h_t = Some(Step::Value(self.h_t / factor));
        config.snapshot_stride = config.snapshot_stride.saturating_mul(1 << level.min(16));
        config.build()
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for (key, value) in overrides {
            table.insert(key.clone(), override_value(value));
        }
        table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
    }

    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let text = match path {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
            None => String::new(),
        };
        Self::from_toml(&text, overrides)
    }

    pub fn h_t(&self) -> f64 {
        self.h_t.unwrap_or(self.h_s).value()
    }

    /// Checks every constraint and builds the grid and kernel.
    pub fn build(self) -> Result<Setup> {
        let grid = Grid::new(self.b, self.l, self.h_s.value())?;
        let p = Exponent::new(self.p)?;
        let h_t = self.h_t();
        if !matches!(aligned_steps(h_t, grid.step()), Some(k) if k > 0) {
            return Err(Error::Misaligned { what: "h_t", value: h_t, step: grid.step() });
        }
        if !(self.t0 > 0.0) {
            return Err(Error::InvalidHorizon(self.t0));
        }
        if self.t0 > self.b {
            return Err(Error::HorizonTooLong { t0: self.t0, b: self.b });
        }
        if aligned_steps(self.t0, h_t).is_none() {
            return Err(Error::Misaligned { what: "t0", value: self.t0, step: h_t });
        }
        if !(self.t_final > 0.0) {
            return Err(Error::InvalidHorizon(self.t_final));
        }
        if aligned_steps(self.t_final, h_t).is_none() {
            return Err(Error::Misaligned { what: "t_final", value: self.t_final, step: h_t });
        }
        if self.tracked.is_empty() {
            return Err(Error::Config("tracked must list at least one seminorm index".into()));
        }
        let max = grid.max_index();
        if let Some(&n) = self.tracked.iter().find(|&&n| n == 0 || n > max) {
            return Err(Error::IndexOutOfRange { n, max });
        }
        if let Some(s) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::Config(format!("unknown suite {s:?}; known suites: {}", SUITES.join(", "))));
        }
        if !matches!(self.datum.as_str(), "smooth" | "zero") {
            return Err(Error::Config(format!("unknown datum {:?}; use smooth or zero", self.datum)));
        }
        if self.samples == 0 {
            return Err(Error::EmptySamples);
        }
        if !(self.threshold >= 0.0) || !(self.dembart_constant > 0.0) || !(self.crosscheck_constant >= 0.0) {
            return Err(Error::Config("threshold and budget constants must be non-negative".into()));
        }
        self.neumann_config().validate()?;
        let phi = load_kernel(&self.kernel, grid, p)?;
        if !self.kernel_scale.is_finite() {
            return Err(Error::Config("kernel_scale must be finite".into()));
        }
        let phi = phi.scaled(self.kernel_scale);
        let k_eff = phi.effective_contraction(self.t0);
        if !phi.is_zero() && k_eff >= 1.0 {
            return Err(Error::PerturbationTooLarge { k_eff });
        }
        Ok(Setup { grid, p, h_t, phi, config: self })
    }

    fn neumann_config(&self) -> NeumannConfig {
        NeumannConfig { tol: self.tol, max_terms: self.max_terms, tracked: self.tracked.clone() }
    }
}

fn override_value(raw: &str) -> toml::Value {
    // reuse the toml grammar so `tracked=[1,2]` and `kernel=uniform` both work
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

pub fn load_kernel(source: &str, grid: Grid, p: Exponent) -> Result<BoundaryFunctional> {
    match source {
        "zero" => BoundaryFunctional::zero(grid, p),
        "uniform" => BoundaryFunctional::uniform(grid, p),
        "bump" => BoundaryFunctional::bump(grid, p),
        path => {
            let file = File::open(path)
                .map_err(|e| Error::Config(format!("kernel {path:?} is neither a preset nor a readable file: {e}")))?;
            BoundaryFunctional::from_csv(file, grid, p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_documented_defaults() {
        let cfg = RunConfig::from_toml("", &[]).unwrap();
        assert_eq!(cfg, RunConfig::default());
        let setup = cfg.build().unwrap();
        assert_eq!(setup.grid.step(), 1.0 / 256.0);
        assert_eq!(setup.h_t, setup.grid.step());
        assert_eq!(setup.neumann().max_terms, 64);
    }

    #[test]
    fn fractions_and_overrides() {
        let cfg = RunConfig::from_toml(
            "h_s = \"1/128\"\nh_t = 0.015625\nkernel = \"uniform\"",
            &[("tracked".into(), "[2]".into()), ("kernel".into(), "zero".into())],
        )
        .unwrap();
        assert_eq!(cfg.h_s.value(), 1.0 / 128.0);
        assert_eq!(cfg.h_t(), 1.0 / 64.0);
        assert_eq!(cfg.tracked, vec![2]);
        assert_eq!(cfg.kernel, "zero");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_toml("bogus = 1", &[]), Err(Error::Config(_))));
    }

    #[test]
    fn misaligned_time_step() {
        let cfg = RunConfig { h_t: Some(Step::Value(0.003)), ..RunConfig::default() };
        assert!(matches!(cfg.build(), Err(Error::Misaligned { what: "h_t", .. })));
    }

    #[test]
    fn strong_perturbation_is_refused() {
        let cfg = RunConfig { kernel: "uniform".into(), t0: 0.5, ..RunConfig::default() };
        let err = cfg.build().unwrap_err();
        assert!(err.to_string().contains("perturbation too large for horizon"));
    }

    #[test]
    fn refined_setup_halves_both_steps() {
        let setup = RunConfig::default().build().unwrap();
        let fine = setup.refined(2).unwrap();
        assert_eq!(fine.grid.step(), setup.grid.step() / 4.0);
        assert_eq!(fine.h_t, setup.h_t / 4.0);
    }
}
