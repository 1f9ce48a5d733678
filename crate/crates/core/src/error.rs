use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument or state outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to reach its requested accuracy.
    #[error("numerical error: {what} (achieved error estimate {achieved:.3e})")]
    Numerical { what: String, achieved: f64 },

    /// The time integrator lost too much norm; the step should be reduced.
    #[error(
        "integration quality: relative norm drift {drift:.3e} exceeds {limit:.1e} at t = {t}; \
         reduce the time step"
    )]
    IntegrationQuality { drift: f64, limit: f64, t: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
