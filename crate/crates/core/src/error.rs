use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("position {position:?} lies outside the admissible domain ({domain})")]
    Domain {
        domain: &'static str,
        position: Vec<f64>,
    },

    #[error("integration left the admissible domain ({domain}) at t = {t}")]
    Singularity { domain: &'static str, t: f64 },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("need at least {needed} samples, got {got}")]
    Size { needed: usize, got: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid integration config: {0}")]
    InvalidConfig(String),

    #[error("invalid geodesic parameters: {0}")]
    InvalidParams(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
