use thiserror::Error;

use crate::spectral::ModeIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires the {expected} variant")]
    WrongVariant { expected: &'static str },

    #[error("malformed subgroup: {0}")]
    MalformedSubgroup(String),

    #[error("cannot parse symmetry '{input}': {reason}")]
    SymmetryParse { input: String, reason: String },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {max_steps} steps before reaching t = {t_end}")]
    TooManySteps { max_steps: usize, t_end: f64 },

    #[error("no periodic orbit found after {iterations} Newton iterations (last residual {residual:e})")]
    NoOrbitFound { iterations: usize, residual: f64 },

    #[error("guess is constant (amplitude {amplitude:e}); a periodic orbit needs a nonconstant seed")]
    ConstantGuess { amplitude: f64 },

    #[error("orbit is not converged (residual {residual:e} exceeds {limit:e})")]
    OrbitNotConverged { residual: f64, limit: f64 },

    #[error("period {period} lies in the resonant exclusion set: {}", format_resonances(.offending))]
    RejectedResonantPeriod { period: f64, offending: Vec<Resonance> },

    #[error("mode {mode} has K_t = 0; the prescribed-period search requires K_t != 0 for every mode")]
    SingularMode { mode: ModeIndex },

    #[error("not admissible: {0}")]
    Inadmissible(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

/// One element of the excluded period set `2pi(2k-1)/sqrt(b K_t)` hit by a requested period.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Resonance {
    pub k: i64,
    pub mode: ModeIndex,
    pub k_value: f64,
}

fn format_resonances(r: &[Resonance]) -> String {
    r.iter()
        .map(|r| format!("(k={}, t={}, K={})", r.k, r.mode, r.k_value))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepSizeUnderflow { .. }
                | Error::TooManySteps { .. }
                | Error::NoOrbitFound { .. }
                | Error::OrbitNotConverged { .. }
                | Error::LinearAlgebra(_)
        )
    }

    /// True when a hypothesis of one of the existence/occurrence results is violated.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::RejectedResonantPeriod { .. }
                | Error::SingularMode { .. }
                | Error::Inadmissible(_)
        )
    }
}
