use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    Parameter(String),

    /// Elimination hit a pivot that is zero relative to the matrix scale.
    #[error("singular system: pivot {pivot} is {value:e}")]
    Singular { pivot: usize, value: f64 },

    #[error("no root found: {0}")]
    NoRoot(String),

    #[error("local system on cell {cell} could not be condensed: {source}")]
    Condensation {
        cell: usize,
        #[source]
        source: Box<Error>,
    },

    /// The stabilization parameter vanishes as P -> 0, so the local
    /// problems become singular.
    #[error("degenerate mesh Peclet number {peclet:e}: the SG stabilization is undefined for |P| < 1e-10 (use a fixed tau, or opt in to the tau = alpha/h fallback)")]
    DegeneratePeclet { peclet: f64 },

    #[error("stabilization solver did not converge: {0}")]
    NoConvergence(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Parameter(_) | Error::DegeneratePeclet { .. })
    }
}
