use thiserror::Error;

/// A single violated precondition of the closed-form witness improvement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Constraint {
    #[error("a must be positive (got {a})")]
    NonPositiveA { a: f64 },
    #[error("b must be positive (got {b})")]
    NonPositiveB { b: f64 },
    #[error("a*b = {product} must be at least Delta^2 = {required}")]
    ProductTooSmall { product: f64, required: f64 },
    #[error("a = {a} must satisfy a < -<W> = {limit} to keep the state detected")]
    AbandonsDetection { a: f64, limit: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown observable label {0:?}")]
    UnknownLabel(String),
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },
    #[error("unsupported qubit count {0} (expected 4 or 6)")]
    UnsupportedQubitCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("matrix is not square or has an invalid dimension {0}")]
    BadShape(usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("observable is not dichotomic (max deviation of O^2 from identity {0:e})")]
    NotDichotomic(f64),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("operator is not positive semidefinite (minimal eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("non-finite entry")]
    NonFinite,
    #[error("{name} = {value} outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("Kraus operators are not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("term {term} is not diagonal in setting {setting}")]
    TermNotDiagonal { term: String, setting: String },
    #[error("setting index {0} does not exist")]
    NoSuchSetting(usize),
    #[error("party {party} uses {count} distinct observables; at most 2 are supported")]
    TooManyObservables { party: usize, count: usize },
    #[error("inequality has no settings")]
    EmptyInequality,
    #[error("missing data for setting {0}")]
    MissingSetting(String),
    #[error("unknown setting label {0}")]
    UnknownSetting(String),
    #[error("setting {0} has zero total counts")]
    NoData(String),
    #[error("setting {setting}: expected {expected} outcome counts, found {found}")]
    CountLength { setting: String, expected: usize, found: usize },
    #[error("setting {0}: counts must be finite and non-negative")]
    BadCount(String),
    #[error("invalid shot budget: {0}")]
    Budget(String),
    #[error("expectation value {0:e} is too close to zero")]
    DegenerateMean(f64),
    #[error("state is not detected (<W> = {0} >= 0)")]
    NotDetected(f64),
    #[error("state is already an eigenstate of the witness (Delta = {0:e})")]
    AlreadyEigenstate(f64),
    #[error("gamma must be positive (got {0})")]
    NonPositiveGamma(f64),
    #[error("constraint violations: {}", join(.0))]
    Constraints(Vec<Constraint>),
    #[error("significance difference does not change sign on the searched interval")]
    NoCrossing,
    #[error("at least {min} trials required, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("schema error: {0}")]
    Schema(String),
}

fn join(items: &[Constraint]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
