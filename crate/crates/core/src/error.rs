use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("fock truncation must keep at least 2 levels, got {0}")]
    TruncationTooSmall(usize),

    #[error("matrix entry ({i},{j}) breaks symmetry: |M[i][j] - M[j][i]| = {defect:e}")]
    NotSymmetric { i: usize, j: usize, defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix dimension {0} exceeds the solver maximum {1}")]
    DimensionTooLarge(usize, usize),

    #[error("QL iteration for eigenvalue index {index} did not converge after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("model {model} does not admit a symmetry-breaking term (epsilon = {epsilon})")]
    EpsilonNotAllowed { model: &'static str, epsilon: f64 },

    #[error("frequency must be positive: {name} = {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    #[error("parity sectors require a parity-symmetric model (epsilon = 0), got epsilon = {0}")]
    ParityBroken(f64),

    #[error("parity sectors are defined for the Rabi-form models, not {0}")]
    SectorsUnsupported(&'static str),

    #[error("vector is not normalized: ||v|| = {0}")]
    NotNormalized(f64),

    #[error("requested {levels} levels but the truncation admits at most {max}")]
    TooManyLevels { levels: usize, max: usize },

    #[error("coupling grid must be strictly ascending")]
    GridNotAscending,

    #[error("spectral flow has no tracked line identities; run track_lines first")]
    FlowNotTracked,

    #[error("coupling grid is empty")]
    GridEmpty,

    #[error(
        "truncation not converged at the n_cut cap {cap} (last max eigenvalue delta {last_delta:e})"
    )]
    TruncationCap { cap: usize, last_delta: f64 },

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("histogram needs at least 2 bins, got {0}")]
    TooFewBins(usize),

    #[error("histogram input is empty")]
    EmptyRecords,

    #[error("uncertainty product {0} outside [0, 1/2]")]
    DeltaOutOfRange(f64),

    #[error("eigensolver failure at grid index {index} (g = {g}): {source}")]
    SweepFailure {
        index: usize,
        g: f64,
        source: Box<Error>,
    },
}
