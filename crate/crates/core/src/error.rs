use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chain length must be a positive odd integer, got {0}")]
    EvenOrZeroSites(usize),
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("mode index {k} out of range for N = {n_sites} (|k| <= {})", (n_sites - 1) / 2)]
    ModeOutOfRange { k: i64, n_sites: usize },
    #[error("site {site} out of range for N = {n_sites} (sites are 1..={n_sites})")]
    SiteOutOfRange { site: i64, n_sites: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("states belong to different chains")]
    ParamsMismatch,
    #[error("wavefunction magnitude {value:e} below residual floor {floor:e}")]
    BelowFloor { value: f64, floor: f64 },
    #[error("residual requires a single occupation eigenstate, state has {0} terms")]
    NotEigenstate(usize),
    #[error("invalid render spec: {0}")]
    InvalidSpec(String),
    #[error("non-finite wavefunction value at sample {0}")]
    NonFinite(usize),
    #[error("empty sample batch")]
    EmptyBatch,
    #[error("malformed {what} at line {line}: {msg}")]
    Parse {
        what: &'static str,
        line: usize,
        msg: String,
    },
}
