use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("bitstring is empty")]
    EmptyString,
    #[error("invalid character {0:?} in bitstring (expected '0' or '1')")]
    InvalidCharacter(char),
    #[error("amplitude count {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("expected {expected} qubit(s), got {actual}")]
    WrongQubitCount { expected: usize, actual: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range 1..={num_qubits}")]
    TargetOutOfRange { index: usize, num_qubits: usize },
    #[error("gate {kind} takes {expected} target(s), got {actual}")]
    ArityMismatch {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("gate targets must be distinct")]
    DuplicateTarget,
    #[error("{what} supports at most {max} qubits, got {actual}")]
    TooManyQubits {
        what: &'static str,
        max: usize,
        actual: usize,
    },
    #[error("chain must have at least 2 sites, got {0}")]
    TooFewSites(usize),
    #[error("chain of {0} sites exceeds the dense limit of 12")]
    TooManySites(usize),
    #[error("closed chain needs at least 3 sites, got {0}")]
    ClosedChainTooSmall(usize),
    #[error("expected {expected} field values, got {actual}")]
    FieldCount { expected: usize, actual: usize },
    #[error("domain-wall state needs an even number of sites, got {0}")]
    OddSitesForDomainWall(usize),
    #[error("({0}, {1}) is not an adjacent or wrap-around site pair")]
    InvalidSitePair(usize, usize),
    #[error("site {site} out of range 1..={num_sites}")]
    SiteOutOfRange { site: usize, num_sites: usize },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shot counts are empty")]
    EmptyCounts,
    #[error("time grids differ")]
    GridMismatch,
    #[error("cannot parse circuit line {line}: {reason}")]
    CircuitParse { line: usize, reason: String },
}
