use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms (last relative term {last:e})")]
    Truncation { terms: usize, last: f64 },
    #[error("integration did not converge: estimate {estimate:e}, error {error:e} after {subdivisions} subdivisions")]
    Integration { estimate: f64, error: f64, subdivisions: usize },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("series refused: {0}")]
    SeriesRefused(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("no classical orbit: {0}")]
    NoOrbit(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
