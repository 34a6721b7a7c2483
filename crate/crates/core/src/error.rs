use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("inequality fails at modes {modes:?}")]
    InvalidInequality { modes: Vec<u32> },

    #[error("outside the closed-form regime: {0}")]
    OutsideRegime(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("quadrature tolerance not met (estimate {estimate:e}, error {error:e}, target {target:e})")]
    ToleranceNotMet { estimate: f64, error: f64, target: f64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("grid too coarse: residual {residual:e} exceeds {target:e}")]
    GridTooCoarse { residual: f64, target: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("harmonic (n={n}, m={m}) is even in the last coordinate")]
    EvenModeRejected { n: u32, m: u32 },

    #[error("denominator vanishes")]
    ZeroDenominator,
}

impl Error {
    /// True for failures of a numerical procedure rather than of the input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotMet { .. } | Error::NonConvergence(_) | Error::GridTooCoarse { .. }
        )
    }
}
