use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("exponent must satisfy 1 < p < inf, got {0}")]
    InvalidExponent(f64),

    #[error("{what} = {value} is not an integer multiple of the step {step}")]
    Misaligned {
        what: &'static str,
        value: f64,
        step: f64,
    },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("seminorm index {n} out of range (largest admissible index is {max})")]
    IndexOutOfRange { n: usize, max: usize },

    #[error("grid functions live on different grids or exponents")]
    GridMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite sample value")]
    NonFinite,

    #[error("path does not vanish at t = 0 (max |f(0)| = {0})")]
    NotInPathSpace(f64),

    #[error("horizon {t0} exceeds the right endpoint b = {b}")]
    HorizonTooLong { t0: f64, b: f64 },

    #[error("horizon {have} is shorter than the required {need}")]
    HorizonTooShort { have: f64, need: f64 },

    #[error("invalid horizon {0}")]
    InvalidHorizon(f64),

    #[error("perturbation too large for horizon: t0^(1/p) K = {k_eff} >= 1")]
    PerturbationTooLarge { k_eff: f64 },

    #[error("kernel has nonzero values outside [-1, b]")]
    InvalidKernel,

    #[error("time step {h_t} is too large for the kernel: no window keeps t^(1/p) K <= {target}")]
    StepTooLarge { h_t: f64, target: f64 },

    #[error("empty sample set")]
    EmptySamples,

    #[error("{what}: input outside the discrete domain (residual {residual:e})")]
    OutsideDomain { what: String, residual: f64 },

    #[error("boundary fixed point did not converge at step {step}")]
    FixedPointDiverged { step: usize },

    #[error("empirical contraction ratio {ratio} exceeds bound {bound}")]
    ContractionBoundExceeded { ratio: f64, bound: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
