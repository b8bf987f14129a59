use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("target index {index} out of range for {n} targets")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("marginals sum to {sum}, expected {k}")]
    MarginalSum { sum: f64, k: usize },
    #[error("oracle matrix structure violated: {0}")]
    Structure(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}

impl Error {
    /// True for errors raised by enumeration or size guards.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::TooLarge(_))
    }
}
