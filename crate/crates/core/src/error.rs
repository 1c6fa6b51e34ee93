use thiserror::Error;

use crate::roots::RootSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("polynomial has degree 0; at least degree 1 is required")]
    ConstantPolynomial,

    #[error("root finder did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize, partial: Box<RootSet> },

    #[error("QR iteration did not converge at eigenvalue {index}")]
    QrNoConvergence { index: usize },

    #[error("gamma must be nonzero")]
    GammaZero,

    #[error("Im b(z) is undefined at z = 0")]
    ZeroArgument,

    #[error("grid node lies on S = 0 at ({x}, {y})")]
    DegenerateGrid { x: f64, y: f64 },

    #[error("enclosure inconclusive: candidate component touches the box boundary")]
    Inconclusive,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{check} check failed: {source}")]
    Check {
        check: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Whether the failure is numerical (non-convergence) rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::QrNoConvergence { .. } | Error::Inconclusive => true,
            Error::Check { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
