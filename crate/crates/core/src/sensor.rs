//! Laser rangefinder model: beam directions, noisy range simulation, and the
//! Gaussian measurement log-likelihood.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{ray_cast, Pose, RoomMap};
use crate::real::{normalize_degrees, Real};

/// One range reading: beam direction, measured range, noise RMS.
///
/// `angle_deg` is an absolute direction when the heading is known. In
/// unknown-heading estimation it holds the body-relative offset and the
/// filter adds each candidate heading before ray casting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamMeasurement<F> {
    pub angle_deg: F,
    /// Measured range in meters. Noise can drive it negative at short true
    /// ranges; that is kept as-is and handled by the likelihood.
    pub range: F,
    pub noise_rms: F,
}

impl<F: Real> BeamMeasurement<F> {
    /// Builds a measurement, normalizing the angle to [0, 360).
    pub fn new(angle_deg: F, range: F, noise_rms: F) -> Result<Self> {
        if !(noise_rms >= F::zero() && noise_rms.is_finite()) {
            return Err(Error::InvalidMeasurement(format!(
                "noise_rms must be finite and non-negative, got {noise_rms}"
            )));
        }
        if !range.is_finite() {
            return Err(Error::InvalidMeasurement(format!("range must be finite, got {range}")));
        }
        Ok(BeamMeasurement { angle_deg: normalize_degrees(angle_deg), range, noise_rms })
    }
}

/// Rangefinder characteristics. Defaults follow the Hokuyo URG-04LX class of
/// device: 0.36 deg angular resolution, 0.05 m range noise RMS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrfSpec<F> {
    pub resolution_deg: F,
    pub noise_rms: F,
    /// Optional range clamp applied by callers that want a finite span;
    /// `None` (default) leaves simulated ranges unclamped.
    pub max_range: Option<F>,
}

impl<F: Real> Default for LrfSpec<F> {
    fn default() -> Self {
        LrfSpec { resolution_deg: F::cast(0.36), noise_rms: F::cast(0.05), max_range: None }
    }
}

impl<F: Real> LrfSpec<F> {
    /// Direction of scan beam `index_i` (1-based) for this device.
    pub fn beam_angle(&self, heading_deg: F, index_i: usize) -> Result<F> {
        beam_angle(heading_deg, index_i, self.resolution_deg)
    }

    /// Applies the max-range clamp when one is configured.
    pub fn clamp(&self, range: F) -> F {
        match self.max_range {
            Some(m) => range.min(m),
            None => range,
        }
    }
}

/// Direction of the i-th beam of a scan starting at `heading_deg`:
/// heading + (i - 1) * resolution, normalized to [0, 360). Beams are 1-based.
pub fn beam_angle<F: Real>(heading_deg: F, index_i: usize, resolution_deg: F) -> Result<F> {
    if index_i < 1 {
        return Err(Error::InvalidBeamIndex { index: index_i });
    }
    let offset = F::from_usize(index_i - 1).unwrap_or_else(F::nan) * resolution_deg;
    Ok(normalize_degrees(heading_deg + offset))
}

/// Simulates one range reading from `true_pose` along `angle_deg`:
/// geometric range plus zero-mean Gaussian noise of the given RMS.
/// `noise_rms = 0` returns the exact geometric range and leaves `rng` untouched.
pub fn simulate_measurement<F: Real, R: Rng + ?Sized>(
    map: &RoomMap<F>,
    true_pose: &Pose<F>,
    angle_deg: F,
    noise_rms: F,
    rng: &mut R,
) -> Result<BeamMeasurement<F>> {
    if !(noise_rms >= F::zero() && noise_rms.is_finite()) {
        return Err(Error::InvalidMeasurement(format!(
            "noise_rms must be finite and non-negative, got {noise_rms}"
        )));
    }
    let hit = ray_cast(map, &true_pose.position(), angle_deg)?;
    let range = if noise_rms > F::zero() {
        hit.range + noise_rms * F::standard_normal(rng)
    } else {
        hit.range
    };
    Ok(BeamMeasurement { angle_deg: normalize_degrees(angle_deg), range, noise_rms })
}

/// Gaussian measurement log-likelihood of `candidate`, up to an additive
/// constant: -1/2 * sum_j (y_j - rho_j)^2 / r_j^2, where rho_j is the
/// ray-cast range from the candidate position along measurement angle j.
///
/// A candidate outside the map (or too close to a wall for ray casting)
/// returns -inf rather than an error, so grids overlapping the boundary
/// degrade gracefully. The candidate heading is not used here; callers doing
/// heading search fold it into the measurement angles.
pub fn log_likelihood<F: Real>(
    measurements: &[BeamMeasurement<F>],
    candidate: &Pose<F>,
    map: &RoomMap<F>,
) -> F {
    let pos = candidate.position();
    let mut acc = F::zero();
    for m in measurements {
        let rho = match ray_cast(map, &pos, m.angle_deg) {
            Ok(hit) => hit.range,
            Err(_) => return F::neg_infinity(),
        };
        let z = (m.range - rho) / m.noise_rms;
        acc += F::cast(-0.5) * z * z;
    }
    acc
}
