use thiserror::Error;

use crate::field::ExtendedReal;

pub type Result<T> = std::result::Result<T, Error>;

/// Which end of the real line an unbounded region or a tail refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field profile: {0}")]
    InvalidProfile(String),

    #[error("x = {x} lies outside the tabulated range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureFailed { a: f64, b: f64 },

    #[error("{value} is outside the range ({lo}, {hi}) of the vector potential")]
    OutsideFluxRange {
        value: f64,
        lo: ExtendedReal,
        hi: ExtendedReal,
    },

    #[error("the vector potential is not strictly increasing for this profile")]
    NonMonotone,

    #[error("field b({x}) = {b} is not positive")]
    NonPositiveField { x: f64, b: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("the classically allowed region {{V <= {energy}}} is unbounded on the {side}")]
    UnboundedAllowedRegion { energy: f64, side: Side },

    #[error("inverse iteration did not converge near lambda = {lambda}")]
    EigenvectorNotConverged { lambda: f64 },

    #[error("no eigenpair for band {band} at xi = {xi}")]
    MissingEigenpair { band: usize, xi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient dynamic range: max/min = {ratio} (need at least 10)")]
    InsufficientRange { ratio: f64 },

    #[error("lambda = {lambda} is below the essential threshold {threshold}; not an embedded energy")]
    NotEmbedded { lambda: f64, threshold: ExtendedReal },

    #[error("tail potential is not numerically integrable: {0}")]
    NotIntegrable(String),

    #[error("ODE integration failed: {0}")]
    IntegrationFailed(String),
}
