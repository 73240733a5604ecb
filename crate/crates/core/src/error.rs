use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cat state: {0}")]
    InvalidState(String),

    #[error("invalid channel parameters: {0}")]
    InvalidChannel(String),

    #[error("invalid lossy stage: {0}")]
    InvalidStage(String),

    #[error("composite channel needs {expected} stage(s), got {found}")]
    StageCount { expected: usize, found: usize },

    #[error("composite transmittance is 1; the effective thermal variance is undefined")]
    DegenerateComposite,

    #[error("operation requires an odd-parity cat state")]
    RequiresOddParity,

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("scalar maximization did not converge after {evaluations} evaluations (best x = {best_x})")]
    NotConverged { evaluations: usize, best_x: f64 },

    #[error("no pre-squeezing can protect central negativity (eta = {eta}, v = {v})")]
    NoProtectionPossible { eta: f64, v: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature did not converge: value {value}, estimated error {estimate}")]
    QuadratureNotConverged { value: f64, estimate: f64 },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite result: {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
