use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polarization {0} outside [-1, 1]")]
    PolarizationOutOfRange(f64),
    #[error("refresh efficiency {0} outside [0, 1]")]
    EfficiencyOutOfRange(f64),
    #[error("qubit index {index} out of range for {n} qubits (indices are 1-based)")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("spin index {index} out of range for {m} spins (indices are 1-based)")]
    SpinOutOfRange { index: usize, m: usize },
    #[error("repeated index {0}")]
    RepeatedIndex(usize),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("no convergence after {rounds} rounds (last change {last_change:e})")]
    NonConvergence { rounds: usize, last_change: f64 },
    #[error("invalid spin system: {0}")]
    InvalidSystem(String),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("Hamiltonian has no terms: {0}")]
    EmptyOperator(String),
    #[error("toggle sequence has zero cycle time")]
    ZeroCycleTime,
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid RF distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid optimization config: {0}")]
    InvalidConfig(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid error model: {0}")]
    InvalidErrorModel(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("all ideal polarizations are zero")]
    AllIdealZero,
    #[error("nonpositive ratio {0}")]
    NonPositiveRatio(f64),
    #[error("config: {0}")]
    Config(String),
}
