use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("qubit {qubit} out of range for a {size}-qubit register")]
    QubitOutOfRange { qubit: usize, size: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("subset to keep is empty")]
    EmptySubset,

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    Incomplete(f64),

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("ansatz needs at least one layer")]
    ZeroLayers,

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("parameter slot {slot} out of range ({count} slots)")]
    SlotOutOfRange { slot: usize, count: usize },

    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                return Error::Io(io);
            }
            unreachable!()
        }
        Error::Serialization(e.to_string())
    }
}

impl Error {
    /// Process exit status: 3 for failures writing or reading files, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Serialization(_) => 3,
            _ => 2,
        }
    }
}
