use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by state construction, channels, and measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation too small: {context} (tail mass {tail:.3e} exceeds {limit:.3e})")]
    Truncation {
        context: String,
        tail: f64,
        limit: f64,
    },

    #[error("parameter {name} = {value} outside valid range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("mode index {mode} out of range for {modes}-mode state")]
    BadMode { mode: usize, modes: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("trace {trace:.12} deviates from 1 beyond tolerance")]
    BadTrace { trace: f64 },

    #[error("covariance matrix is unphysical (min eigenvalue of V + iΩ/2 is {min_eig:.3e})")]
    Unphysical { min_eig: f64 },

    #[error("Kraus operators do not form a valid channel: {0}")]
    BadKraus(String),

    #[error("insufficient truncation headroom: {0}")]
    Headroom(String),

    #[error("projection weight {weight:.3e} below 1e-14; conditional state undefined")]
    ZeroWeight { weight: f64 },

    #[error("dimension {dim} exceeds configured maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("grid too coarse: bracket changed under refinement ({0})")]
    GridTooCoarse(String),

    #[error("descriptor error: {0}")]
    Descriptor(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
