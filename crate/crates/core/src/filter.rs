//! Point-mass filter: a fixed grid of candidate poses whose log-weights
//! approximate the posterior p.d.f. of the object state.
//!
//! The prior is uniform over the grid points inside the room. A measurement
//! update multiplies each weight by the Gaussian likelihood of that point;
//! all of it runs in natural-log space with max-shifted normalization, since
//! at centimeter noise levels most of the grid underflows linear doubles.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Bounds2, Point2, Pose, RoomMap};
use crate::matrix::SymMatrix;
use crate::real::{normalize_degrees, wrap_degrees_pm180, Real};
use crate::sensor::{log_likelihood, BeamMeasurement};

/// Grid axes addressable in marginals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
    Heading,
}

/// Layout of the estimation grid.
///
/// Position points sit at cell centers of the uniform `n1` x `n2` partition
/// of `bounds`, so with bounds equal to the room every point is strictly
/// interior. Heading points (when `nk > 1`) sit at m * 360 / nk degrees.
/// With `nk = 1` the heading is fixed at `known_heading_deg` and measurement
/// angles are taken as absolute directions.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<F> {
    pub n1: usize,
    pub n2: usize,
    pub nk: usize,
    pub bounds: Bounds2<F>,
    pub known_heading_deg: F,
}

impl<F: Real> GridSpec<F> {
    pub fn new(
        n1: usize,
        n2: usize,
        nk: usize,
        bounds: Bounds2<F>,
        known_heading_deg: F,
    ) -> Result<Self> {
        let spec =
            GridSpec { n1, n2, nk, bounds, known_heading_deg: normalize_degrees(known_heading_deg) };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid over the map's bounding box.
    pub fn for_map(map: &RoomMap<F>, n1: usize, n2: usize, nk: usize, known_heading_deg: F) -> Result<Self> {
        Self::new(n1, n2, nk, map.bounding_box(), known_heading_deg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points per position axis, got {} x {}",
                self.n1, self.n2
            )));
        }
        if self.nk < 1 {
            return Err(Error::InvalidGrid("nk must be at least 1".into()));
        }
        if !(self.bounds.x1_extent() > F::zero() && self.bounds.x2_extent() > F::zero()) {
            return Err(Error::InvalidGrid("grid bounds must have positive extent".into()));
        }
        if !self.known_heading_deg.is_finite() {
            return Err(Error::InvalidGrid("known heading must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2 * self.nk
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 2 when the heading is known, 3 when it is part of the state.
    pub fn state_dim(&self) -> usize {
        if self.nk == 1 {
            2
        } else {
            3
        }
    }

    pub fn cell_x1(&self) -> F {
        self.bounds.x1_extent() / F::from_usize(self.n1).unwrap_or_else(F::nan)
    }

    pub fn cell_x2(&self) -> F {
        self.bounds.x2_extent() / F::from_usize(self.n2).unwrap_or_else(F::nan)
    }

    pub fn x1_at(&self, j: usize) -> F {
        self.bounds.x1_min + (F::from_usize(j).unwrap_or_else(F::nan) + F::cast(0.5)) * self.cell_x1()
    }

    pub fn x2_at(&self, l: usize) -> F {
        self.bounds.x2_min + (F::from_usize(l).unwrap_or_else(F::nan) + F::cast(0.5)) * self.cell_x2()
    }

    pub fn heading_at(&self, m: usize) -> F {
        if self.nk == 1 {
            self.known_heading_deg
        } else {
            F::from_usize(m).unwrap_or_else(F::nan) * F::cast(360.0)
                / F::from_usize(self.nk).unwrap_or_else(F::nan)
        }
    }

    pub fn pose_at(&self, j: usize, l: usize, m: usize) -> Pose<F> {
        Pose::new(self.x1_at(j), self.x2_at(l), self.heading_at(m))
    }

    /// Storage index of point (j, l, m); j varies fastest, heading slowest.
    pub fn index_of(&self, j: usize, l: usize, m: usize) -> usize {
        (m * self.n2 + l) * self.n1 + j
    }

    pub fn coords_of(&self, index: usize) -> (usize, usize, usize) {
        let j = index % self.n1;
        let rest = index / self.n1;
        (j, rest % self.n2, rest / self.n2)
    }
}

/// Posterior mean; heading present only when it is part of the state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateEstimate<F> {
    pub x1: F,
    pub x2: F,
    pub heading_deg: Option<F>,
}

/// Posterior summary: mean, covariance, per-axis RMS.
///
/// Covariance entries are m^2 on position axes and deg^2 on the heading
/// axis; heading deviations are wrapped to (-180, 180] before averaging.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport<F> {
    pub mean: StateEstimate<F>,
    pub covariance: SymMatrix<F>,
    /// Square roots of the covariance diagonal, one per state axis.
    pub rms: Vec<F>,
    pub n_measurements: usize,
}

/// Weighted point grid approximating a p.d.f. over the object state.
///
/// Weights are stored as natural logs and kept normalized: the linear
/// weights sum to 1 within 1e-10. Points outside the room carry -inf.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightGrid<F> {
    spec: GridSpec<F>,
    log_weights: Vec<F>,
}

impl<F: Real> WeightGrid<F> {
    /// Normalizes raw log-weights into a grid. At least one entry must be
    /// finite; the vector length must match the grid size.
    pub fn from_log_weights(spec: GridSpec<F>, log_weights: Vec<F>) -> Result<Self> {
        spec.validate()?;
        if log_weights.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} log-weights, got {}",
                spec.len(),
                log_weights.len()
            )));
        }
        normalized(spec, log_weights)
    }

    pub fn spec(&self) -> &GridSpec<F> {
        &self.spec
    }

    pub fn log_weights(&self) -> &[F] {
        &self.log_weights
    }

    /// Linear weights; impossible points come out as 0.
    pub fn weights(&self) -> Vec<F> {
        self.log_weights.iter().map(|&lw| lw.exp()).collect()
    }

    /// Position marginal, length n1 * n2, laid out l-major with j fastest.
    pub fn position_weights(&self) -> Vec<F> {
        let slab = self.spec.n1 * self.spec.n2;
        let mut out = vec![F::zero(); slab];
        for (idx, &lw) in self.log_weights.iter().enumerate() {
            out[idx % slab] += lw.exp();
        }
        out
    }

    /// Posterior mean. Position axes average directly; the heading axis
    /// (when active) uses the direction of the weighted resultant vector.
    pub fn mean_estimate(&self) -> StateEstimate<F> {
        let spec = &self.spec;
        let mut m1 = F::zero();
        let mut m2 = F::zero();
        let mut sin_k = F::zero();
        let mut cos_k = F::zero();
        for (idx, &lw) in self.log_weights.iter().enumerate() {
            let w = lw.exp();
            if w == F::zero() {
                continue;
            }
            let (j, l, m) = spec.coords_of(idx);
            m1 += w * spec.x1_at(j);
            m2 += w * spec.x2_at(l);
            if spec.nk > 1 {
                let k = spec.heading_at(m).to_radians();
                sin_k += w * k.sin();
                cos_k += w * k.cos();
            }
        }
        let heading_deg = if spec.nk > 1 {
            Some(normalize_degrees(sin_k.atan2(cos_k).to_degrees()))
        } else {
            None
        };
        StateEstimate { x1: m1, x2: m2, heading_deg }
    }

    /// Central second-moment matrix about `mean`.
    pub fn covariance(&self, mean: &StateEstimate<F>) -> SymMatrix<F> {
        let spec = &self.spec;
        let dim = spec.state_dim();
        let mut cov = SymMatrix::zeros(dim);
        for (idx, &lw) in self.log_weights.iter().enumerate() {
            let w = lw.exp();
            if w == F::zero() {
                continue;
            }
            let (j, l, m) = spec.coords_of(idx);
            let mut d = [spec.x1_at(j) - mean.x1, spec.x2_at(l) - mean.x2, F::zero()];
            if let Some(mean_k) = mean.heading_deg {
                d[2] = wrap_degrees_pm180(spec.heading_at(m) - mean_k);
            }
            cov.add_weighted_outer(w, d);
        }
        cov
    }

    /// Mean, covariance, and per-axis RMS in one report.
    pub fn estimate_report(&self, n_measurements: usize) -> EstimateReport<F> {
        let mean = self.mean_estimate();
        let covariance = self.covariance(&mean);
        let rms = covariance.diagonal().iter().map(|&v| v.sqrt()).collect();
        EstimateReport { mean, covariance, rms, n_measurements }
    }

    /// Weights summed over all axes except `axis`. Sums to 1 within 1e-10.
    pub fn marginal(&self, axis: Axis) -> Result<Vec<F>> {
        let spec = &self.spec;
        if axis == Axis::Heading && spec.nk == 1 {
            return Err(Error::InvalidAxis(
                "heading axis is inactive on a known-heading grid".into(),
            ));
        }
        let n = match axis {
            Axis::X1 => spec.n1,
            Axis::X2 => spec.n2,
            Axis::Heading => spec.nk,
        };
        let mut out = vec![F::zero(); n];
        for (idx, &lw) in self.log_weights.iter().enumerate() {
            let (j, l, m) = spec.coords_of(idx);
            let bin = match axis {
                Axis::X1 => j,
                Axis::X2 => l,
                Axis::Heading => m,
            };
            out[bin] += lw.exp();
        }
        Ok(out)
    }

    /// Writes the grid as plain text: a header `n1 n2 nk x1min x1max x2min
    /// x2max`, then nk * n2 lines of n1 linear weights each, x1 varying
    /// along a line, x2 across lines, heading across line blocks.
    pub fn write_grid_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let s = &self.spec;
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            s.n1, s.n2, s.nk, s.bounds.x1_min, s.bounds.x1_max, s.bounds.x2_min, s.bounds.x2_max
        )?;
        for m in 0..s.nk {
            for l in 0..s.n2 {
                for j in 0..s.n1 {
                    if j > 0 {
                        write!(out, " ")?;
                    }
                    write!(out, "{:e}", self.log_weights[s.index_of(j, l, m)].exp())?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Equal weight on every grid point inside the room, zero elsewhere.
pub fn uniform_prior<F: Real>(spec: &GridSpec<F>, map: &RoomMap<F>) -> Result<WeightGrid<F>> {
    spec.validate()?;
    let mut interior = vec![false; spec.n1 * spec.n2];
    let mut count = 0usize;
    for l in 0..spec.n2 {
        for j in 0..spec.n1 {
            let p = Point2::new(spec.x1_at(j), spec.x2_at(l));
            if map.contains_interior(&p) {
                interior[l * spec.n1 + j] = true;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::EmptyPrior);
    }
    let mut lw = Vec::with_capacity(spec.len());
    for _ in 0..spec.nk {
        lw.extend(interior.iter().map(|&ok| if ok { F::zero() } else { F::neg_infinity() }));
    }
    normalized(spec.clone(), lw)
}

/// One Bayes step: adds each point's measurement log-likelihood to its
/// log-weight and renormalizes.
///
/// With `nk = 1` measurement angles are absolute directions. With `nk > 1`
/// they are body-relative and each heading slab shifts them by its heading
/// before ray casting. Points already impossible stay impossible.
pub fn update<F: Real>(
    grid: &WeightGrid<F>,
    measurements: &[BeamMeasurement<F>],
    map: &RoomMap<F>,
) -> Result<WeightGrid<F>> {
    if measurements.is_empty() {
        return Err(Error::InvalidMeasurement("at least one measurement is required".into()));
    }
    for m in measurements {
        if !(m.noise_rms > F::zero() && m.noise_rms.is_finite()) {
            return Err(Error::InvalidMeasurement(format!(
                "noise_rms must be positive and finite for filtering, got {}",
                m.noise_rms
            )));
        }
        if !m.range.is_finite() {
            return Err(Error::InvalidMeasurement(format!(
                "measured range must be finite, got {}",
                m.range
            )));
        }
    }
    let spec = grid.spec.clone();
    let slab = spec.n1 * spec.n2;
    let mut lw = Vec::with_capacity(spec.len());
    for m_idx in 0..spec.nk {
        let beams: Vec<BeamMeasurement<F>> = if spec.nk == 1 {
            measurements.to_vec()
        } else {
            let k = spec.heading_at(m_idx);
            measurements
                .iter()
                .map(|b| BeamMeasurement {
                    angle_deg: normalize_degrees(b.angle_deg + k),
                    ..*b
                })
                .collect()
        };
        let base = m_idx * slab;
        let old = &grid.log_weights[base..base + slab];
        // Per-point evaluations are independent; ordered collect keeps the
        // result identical for any thread count.
        let updated: Vec<F> = (0..slab)
            .into_par_iter()
            .map(|i| {
                let prior_lw = old[i];
                if prior_lw == F::neg_infinity() {
                    return prior_lw;
                }
                let pose = spec.pose_at(i % spec.n1, i / spec.n1, m_idx);
                prior_lw + log_likelihood(&beams, &pose, map)
            })
            .collect();
        lw.extend(updated);
    }
    normalized(spec, lw)
}

/// Max-shifted log-sum-exp normalization; sequential, so the result does not
/// depend on thread count.
fn normalized<F: Real>(spec: GridSpec<F>, mut lw: Vec<F>) -> Result<WeightGrid<F>> {
    let mut max = F::neg_infinity();
    for &w in &lw {
        if w > max {
            max = w;
        }
    }
    if !max.is_finite() {
        return Err(Error::DegeneratePosterior);
    }
    let mut sum = F::zero();
    for &w in &lw {
        sum += (w - max).exp();
    }
    let lse = max + sum.ln();
    for w in &mut lw {
        *w -= lse;
    }
    Ok(WeightGrid { spec, log_weights: lw })
}
