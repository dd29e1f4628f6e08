use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Fourier integral defining the smoothed density diverges for
    /// `|Im z| >= λ`.
    #[error("evaluation point Im z = {im} lies outside the strip |Im z| < {lambda}")]
    OutsideStrip { im: f64, lambda: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (matrix hash {hash:016x})")]
    SolverFailure { iterations: usize, hash: u64 },

    #[error("spectral enclosure violated: norm drift {drift:e} exceeds 1e-6")]
    Enclosure { drift: f64 },

    #[error("operator dimension {n} exceeds the dense solver cap {cap}")]
    ResourceCap { n: usize, cap: usize },

    #[error("sample {index}: {source}")]
    Sample {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn in_sample(self, index: u64) -> Self {
        Error::Sample {
            index,
            source: Box::new(self),
        }
    }

    /// Innermost error, with any sample annotations peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Sample { source, .. } => source.root(),
            other => other,
        }
    }
}
