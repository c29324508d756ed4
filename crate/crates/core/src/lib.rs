//! Grid-based Bayesian localization of a static object inside a mapped
//! polygonal room, from laser rangefinder readings.
//!
//! The room is a simple polygon of wall segments. Each rangefinder beam
//! measures the distance to the nearest wall along a known direction, with
//! Gaussian noise. The posterior over the object position (and optionally
//! heading) is carried on a fixed point grid whose weights are multiplied by
//! the measurement likelihood and renormalized; the estimate is the
//! posterior mean with its conditional covariance.
//!
//! All numeric code is generic over the scalar type via [`Real`] (f32 or
//! f64). The aliases at the crate root pin f64, which every consumer here
//! uses.
//!
//! ```
//! use roomloc::{filter, geometry, sensor};
//!
//! let map: roomloc::RoomMap = geometry::make_rectangle(4.0, 6.0)?;
//! let spec = filter::GridSpec::for_map(&map, 100, 150, 1, 20.0)?;
//! let prior = filter::uniform_prior(&spec, &map)?;
//! let beams = [
//!     sensor::BeamMeasurement::new(0.0, 3.0, 0.05)?,   // up: 3 m to the far wall
//!     sensor::BeamMeasurement::new(90.0, 2.0, 0.05)?,  // right: 2 m to the near wall
//! ];
//! let posterior = filter::update(&prior, &beams, &map)?;
//! let report = posterior.estimate_report(beams.len());
//! assert!((report.mean.x1 - 2.0).abs() < 0.02);
//! assert!((report.mean.x2 - 3.0).abs() < 0.02);
//! # Ok::<(), roomloc::Error>(())
//! ```

pub mod analysis;
pub mod error;
pub mod filter;
pub mod geometry;
pub mod matrix;
pub mod real;
pub mod sensor;

pub use error::{Error, Result};
pub use filter::Axis;
pub use real::Real;

pub type Point2 = geometry::Point2<f64>;
pub type Bounds2 = geometry::Bounds2<f64>;
pub type Pose = geometry::Pose<f64>;
pub type RayHit = geometry::RayHit<f64>;
pub type RoomMap = geometry::RoomMap<f64>;
pub type SymMatrix = matrix::SymMatrix<f64>;
pub type BeamMeasurement = sensor::BeamMeasurement<f64>;
pub type LrfSpec = sensor::LrfSpec<f64>;
pub type GridSpec = filter::GridSpec<f64>;
pub type WeightGrid = filter::WeightGrid<f64>;
pub type StateEstimate = filter::StateEstimate<f64>;
pub type EstimateReport = filter::EstimateReport<f64>;
pub type BeamSpec = analysis::BeamSpec<f64>;
pub type Scenario = analysis::Scenario<f64>;
pub type ComboRow = analysis::ComboRow<f64>;
pub type ComboTable = analysis::ComboTable<f64>;
pub type UnconditionalCov = analysis::UnconditionalCov<f64>;
