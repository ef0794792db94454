use thiserror::Error;

/// Errors raised by the `sslud` library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mu must be a finite nonzero value, got {0}")]
    InvalidMu(f64),

    #[error("sample must contain at least one observation")]
    EmptySample,

    #[error("observation {index} is not finite ({value})")]
    NonFiniteObservation { index: usize, value: f64 },

    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("significance level {0} is outside the open interval (0, 1)")]
    InvalidAlpha(f64),

    #[error("variance estimate must be nonnegative, got {0}")]
    NegativeVariance(f64),

    #[error("all observations are zero; the likelihood does not depend on mu")]
    DegenerateSample,

    #[error("no feasible value of mu exists on either branch")]
    InfeasibleBranchesEmpty,

    #[error("{what} needs at least {min} values, got {got}")]
    TooFew { what: &'static str, min: usize, got: usize },

    #[error("cutoff was simulated for (mu1 = {cutoff_mu1}, n = {cutoff_n}), not (mu1 = {mu1}, n = {n})")]
    CutoffMismatch {
        cutoff_mu1: f64,
        cutoff_n: usize,
        mu1: f64,
        n: usize,
    },

    #[error("replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid seed {0:?}: expected a decimal or 0x-prefixed hex 64-bit value")]
    InvalidSeed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
