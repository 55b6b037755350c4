use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("two-qubit operation needs distinct qubits, got ({0}, {0})")]
    RepeatedQubit(usize),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid qubit permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("register size mismatch: expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid subsystem {keep:?} for a {n_qubits}-qubit register")]
    InvalidSubsystem { keep: Vec<usize>, n_qubits: usize },

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigendecomposition did not converge: {0}")]
    NoConvergence(String),

    #[error("zero denominator in moment product for composition {composition:?}")]
    ZeroDenominator { composition: Vec<u32> },

    #[error("ensemble report is missing the n_a = {0} bipartition")]
    MissingBipartition(usize),

    #[error("coupling graph is disconnected")]
    DisconnectedGraph,

    #[error("permutation ops cannot be routed; hardware circuits use fixed pair schedules")]
    PermutationInRouting,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("malformed shot record: {0}")]
    Record(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
