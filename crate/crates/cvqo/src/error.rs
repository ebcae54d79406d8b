//! Error type shared across the crate.

/// Errors raised by state construction, symplectic operations, measurements
/// and the verification oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a state needs at least one mode")]
    EmptyState,

    #[error("mode index {mode} out of range for a {modes}-mode state")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("operation requires two distinct modes (got {0} twice)")]
    SameMode(usize),

    #[error("gain must be positive and finite (got {0})")]
    InvalidGain(f64),

    #[error("transmissivity must lie strictly between 0 and 1 (got {0})")]
    InvalidTransmissivity(f64),

    #[error("variance must be positive and finite (got {0})")]
    InvalidVariance(f64),

    #[error("measured quadrature variance {0:e} is degenerate")]
    DegenerateMeasurement(f64),

    #[error("conditioning block is singular; a conditioner is perfectly squeezed or duplicated")]
    DegenerateConditioner,

    #[error("recipe inputs must be minimum uncertainty, V+ V- = 1 (got {0})")]
    ImpureRecipe(f64),

    #[error("photon-resource comparison needs a pure two-mode state (det cov = {0})")]
    ImpureState(f64),

    #[error("covariance is not positive semi-definite (eigenvalue {0:e})")]
    NotPositiveSemiDefinite(f64),

    #[error("teleporter resource must have exactly 2 modes (got {0})")]
    ResourceModeCount(usize),

    #[error("teleporter signal must have exactly 1 mode (got {0})")]
    SignalModeCount(usize),

    #[error("Fock cutoff must be an even number of at least 4 (got {0})")]
    InvalidCutoff(usize),

    #[error("truncation leakage {leakage:e} exceeds {limit:e}; increase the Fock cutoff")]
    CutoffTooSmall { leakage: f64, limit: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "conditional-variance estimate needs more samples ({got} rows for {needed} regressors)"
    )]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("invalid serialized state: {0}")]
    InvalidSerializedState(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
