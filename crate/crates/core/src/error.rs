use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("parameter `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    /// Every outcome is discarded, so the conditional error rate is undefined.
    #[error("fully inconclusive configuration: no outcome is ever accepted")]
    FullyInconclusive,

    /// The requested response length does not capture enough of the filter energy.
    #[error("response truncated: {captured:.6} of the energy captured in {n_samples} samples")]
    Truncated { captured: f64, n_samples: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}
