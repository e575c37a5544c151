use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("Gibbs matrix is singular: symplectic eigenvalue {nu} is within {eps:e} of 1/2")]
    SingularGibbs { nu: f64, eps: f64 },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("intermediate value overflowed the representable range")]
    Overflow,

    #[error("truncation radius {required} exceeds the cap {cap}")]
    CapExceeded { required: usize, cap: usize },

    #[error("captured probability mass {captured} is below the required {required}")]
    MassDeficit { captured: f64, required: f64 },

    #[error("relative entropy variance {0} must be strictly positive")]
    DegenerateVariance(f64),

    #[error("scan row at {snr_db} dB failed: {source}")]
    Row {
        snr_db: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed table: {0}")]
    Parse(String),
}

impl Error {
    /// Configuration errors map to exit code 2, numerical failures to 3.
    pub fn is_config(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::Domain(_) => true,
            Error::Row { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
