use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    /// A sampled grid cannot hold the transformed or propagated amplitude.
    #[error(
        "grid too coarse or too narrow: {edge_fraction:e} of the norm sits at the {axis} edge"
    )]
    Resolution {
        axis: &'static str,
        edge_fraction: f64,
    },

    #[error("coherent integral vanishes (|integral| = {magnitude:e}); cross-section undefined")]
    DegenerateState { magnitude: f64 },

    #[error("components are orthogonal (|overlap| = {magnitude:e}); relative phase undefined")]
    PhaseUndefined { magnitude: f64 },

    #[error("no violation regime: ratio denominator {denominator:e} is not positive")]
    NoViolationRegime { denominator: f64 },

    #[error("outside the approximation domain: {0}")]
    ApproximationDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("grid csv: {0}")]
    Csv(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures caused by numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. }
                | Error::Resolution { .. }
                | Error::DegenerateState { .. }
                | Error::PhaseUndefined { .. }
        )
    }
}
