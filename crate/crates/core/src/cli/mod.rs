//! Batch front end: `semiperturb <verify|evolve|resolvent|contraction>`.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 on a
//! configuration error.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_contraction, cmd_evolve, cmd_resolvent, cmd_verify, Verdict};
pub use config::{load_kernel, RunConfig, Setup, Step, SUITES};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semiperturb", version, about = "Boundary perturbations of the shift semigroup")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML file with `key = value` settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of step halvings for the refinement ladder.
    #[arg(long, global = true)]
    pub refine: Option<usize>,

    /// Largest admissible discrepancy (evolve).
    #[arg(long, global = true)]
    pub threshold: Option<f64>,

    /// Extra `key=value` override, same syntax as the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Seminorm, semigroup-axiom, equicontinuity, Dembart and contraction suites.
    Verify,
    /// Picard-iterated perturbed semigroup against the characteristics oracle.
    Evolve,
    /// Neumann-series perturbed resolvent with its per-term table.
    Resolvent,
    /// Empirical contraction ratio of the smoothing integral.
    Contraction,
}

impl Cli {
    /// File settings, then `--set` pairs, then the dedicated flags.
    pub fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut out = Vec::new();
        for pair in &self.set {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {pair:?}")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        if let Some(dir) = &self.out {
            out.push(("out".into(), format!("{:?}", dir.to_string_lossy())));
        }
        if let Some(seed) = self.seed {
            out.push(("seed".into(), seed.to_string()));
        }
        if let Some(refine) = self.refine {
            out.push(("refine".into(), refine.to_string()));
        }
        if let Some(threshold) = self.threshold {
            out.push(("threshold".into(), format!("{threshold:e}")));
        }
        Ok(out)
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ContractionBoundExceeded { .. } | Error::FixedPointDiverged { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let setup = match cli.overrides().and_then(|o| RunConfig::load(cli.config.as_deref(), &o)).and_then(RunConfig::build) {
        Ok(setup) => setup,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let result = match cli.command {
        Command::Verify => cmd_verify(&setup),
        Command::Evolve => cmd_evolve(&setup),
        Command::Resolvent => cmd_resolvent(&setup),
        Command::Contraction => cmd_contraction(&setup),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
