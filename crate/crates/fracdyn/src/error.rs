/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A call violated a documented precondition (bad dimension, invalid
    /// parameter, non-finite input).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The integrated trajectory left the admissible region (a component
    /// exceeded the blow-up bound or became non-finite). `last_valid` is the
    /// index of the last grid point that was still finite.
    #[error("trajectory diverged after grid index {last_valid} (t = {t})")]
    Diverged { last_valid: usize, t: f64 },

    /// An iterative numerical routine failed to converge or produced
    /// unusable output.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
