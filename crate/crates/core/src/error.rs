//! Error type shared across the crate.

use std::fmt;

/// Errors raised by map construction, ray casting, filtering and studies.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Map polygon failed validation (dimensions, ordering, self-intersection).
    InvalidMap(String),
    /// Ray-cast origin is on or outside the map boundary.
    OriginOutsideMap { x1: f64, x2: f64 },
    /// A ray from an interior point found no wall; the polygon is malformed.
    MapIntegrity(String),
    /// Beam index must be >= 1.
    InvalidBeamIndex { index: usize },
    /// A measurement violates its invariants (e.g. non-positive noise RMS).
    InvalidMeasurement(String),
    /// Grid parameters failed validation (resolution, bounds extent).
    InvalidGrid(String),
    /// No grid point falls strictly inside the map polygon.
    EmptyPrior,
    /// Every grid point was ruled impossible by the measurement update.
    DegeneratePosterior,
    /// Marginal requested over an axis the grid does not resolve.
    InvalidAxis(String),
    /// Scenario-level validation failure (pose outside map, no beams, ...).
    InvalidScenario(String),
    /// Measurement subset is empty or references a beam the scenario lacks.
    InvalidSubset(String),
    /// Monte-Carlo trial count must be >= 1.
    InvalidTrials { trials: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMap(msg) => write!(f, "invalid map: {msg}"),
            Error::OriginOutsideMap { x1, x2 } => {
                write!(f, "ray origin ({x1}, {x2}) m is on or outside the map boundary")
            }
            Error::MapIntegrity(msg) => write!(f, "map integrity violation: {msg}"),
            Error::InvalidBeamIndex { index } => {
                write!(f, "beam index {index} is invalid; indices start at 1")
            }
            Error::InvalidMeasurement(msg) => write!(f, "invalid measurement: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::EmptyPrior => write!(f, "no grid point lies inside the map polygon"),
            Error::DegeneratePosterior => write!(
                f,
                "posterior is degenerate: measurements are inconsistent with the map/grid"
            ),
            Error::InvalidAxis(msg) => write!(f, "invalid axis: {msg}"),
            Error::InvalidScenario(msg) => write!(f, "invalid scenario: {msg}"),
            Error::InvalidSubset(msg) => write!(f, "invalid subset: {msg}"),
            Error::InvalidTrials { trials } => {
                write!(f, "trial count {trials} is invalid; at least 1 trial is required")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
