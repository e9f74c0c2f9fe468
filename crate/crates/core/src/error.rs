use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A NaN or infinite value reached an operation that only admits finite reals.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point sits on the excluded axis of a chart or reduced system.
    #[error("singular chart point: {0}")]
    Singularity(String),

    #[error("state became non-finite at t = {t}")]
    Overflow { t: f64 },

    #[error("step size {dt:e} fell below dt_min at t = {t}")]
    Stalled { t: f64, dt: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no pencil parameter on the grid separates the roots, but c = {c} is not degenerate")]
    Inconclusive { c: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
