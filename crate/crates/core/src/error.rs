use thiserror::Error;

use crate::field::SpaceTimePoint;

/// Errors raised by the construction and verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate matrix: determinant {det:e} is below threshold {eps:e}")]
    DegenerateMatrix { det: f64, eps: f64 },

    #[error("branch point: |psi1|^2 + |psi2|^2 = {metric_factor:e}")]
    BranchPoint { metric_factor: f64 },

    #[error("singular frame: det(Psi0) = {det:e}")]
    SingularFrame { det: f64 },

    #[error("blow-up point at (x, y, t) = ({}, {}, {})", .0.x, .0.y, .0.t)]
    BlowUpPoint(SpaceTimePoint),

    #[error("stencil node ({}, {}, {}) collides with the blow-up locus", .0.x, .0.y, .0.t)]
    StencilCollision(SpaceTimePoint),

    #[error("quadrature failed to reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },

    #[error("tolerance {tol:e} not met after {evaluations} evaluations (error estimate {estimate:e})")]
    ToleranceNotMet {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("polynomial degree {degree} exceeds the maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateMatrix { .. } => "DegenerateMatrix",
            Error::BranchPoint { .. } => "BranchPoint",
            Error::SingularFrame { .. } => "SingularFrame",
            Error::BlowUpPoint(_) => "BlowUpPoint",
            Error::StencilCollision(_) => "StencilCollision",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::DegreeTooHigh { .. } => "DegreeTooHigh",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
