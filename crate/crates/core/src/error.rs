use crate::catalog::GateId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("level index {0} out of range 0..=3")]
    LevelOutOfRange(usize),

    #[error("transition ({m},{n}) must satisfy m < n with both levels in 0..=3")]
    InvalidTransition { m: usize, n: usize },

    #[error("transitions ({0},{1}) and ({2},{3}) share a level")]
    SharedLevel(usize, usize, usize, usize),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("operator is not unitary (max |U^dagger U - E| = {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("operators are not equal up to a global phase (distance {distance:.3e})")]
    NotPhaseEquivalent { distance: f64 },

    #[error("{gate} has no virtual-spin factorization")]
    NoFactorization { gate: GateId },

    #[error("{gate} has no pulse realization; use {suggestion} instead")]
    Unsupported { gate: GateId, suggestion: GateId },

    #[error("compiled sequence for {gate} misses its target (distance {distance:.3e})")]
    VerificationFailed { gate: GateId, distance: f64 },

    #[error("gradient events are not unitary; evolve the density matrix instead")]
    GradientInUnitary,

    #[error("delay duration must be finite and non-negative, got {0}")]
    NegativeDelay(f64),

    #[error("{0}")]
    Domain(String),

    #[error("exact thermal state overflows at this inverse temperature; use the linearized form")]
    ThermalOverflow,

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("pseudo-pure preparation failed, final populations {populations:?}")]
    PreparationFailed { populations: [f64; 4] },

    #[error("ambiguous readout, deviation weights {weights:?}")]
    AmbiguousClassification { weights: [f64; 4] },
}
