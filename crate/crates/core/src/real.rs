//! Scalar abstraction: the whole library is generic over the floating-point
//! type through this trait, with `f32` and `f64` as the provided instances.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar usable for map geometry, likelihoods and grid weights.
///
/// Everything numeric in this crate is written against `Real`; `f64` is the
/// type the bundled studies run at (the stated tolerances assume it), `f32`
/// works for memory-constrained grids.
pub trait Real:
    Float + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Shorthand for converting literal constants.
    fn cast(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// One draw from N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One draw from the uniform distribution on [0, 1).
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample::<f32, _>(StandardNormal)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample::<f64, _>(StandardNormal)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

/// Normalizes an angle in degrees to [0, 360).
pub fn normalize_degrees<F: Real>(angle: F) -> F {
    let full = F::cast(360.0);
    let mut a = angle % full;
    if a < F::zero() {
        a += full;
    }
    // `x % 360 == 360 - tiny` can round back up to 360 for negative inputs.
    if a >= full {
        a -= full;
    }
    a
}

/// Wraps an angle difference in degrees to (-180, 180].
pub fn wrap_degrees_pm180<F: Real>(delta: F) -> F {
    let full = F::cast(360.0);
    let half = F::cast(180.0);
    let mut d = normalize_degrees(delta);
    if d > half {
        d -= full;
    }
    d
}
