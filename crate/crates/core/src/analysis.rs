//! Scenario-level studies: single estimation runs, measurement-subset
//! comparison tables, and Monte-Carlo unconditional error covariance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{uniform_prior, update, EstimateReport, GridSpec, WeightGrid};
use crate::geometry::{Point2, Pose, RoomMap};
use crate::matrix::SymMatrix;
use crate::real::{normalize_degrees, wrap_degrees_pm180, Real};
use crate::sensor::{simulate_measurement, BeamMeasurement};

/// One configured beam: direction and range noise RMS.
///
/// The angle is an absolute direction on a known-heading grid (nk = 1) and a
/// body-relative offset on an unknown-heading grid (nk > 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSpec<F> {
    pub angle_deg: F,
    pub noise_rms: F,
}

/// A complete, reproducible experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<F> {
    pub map: RoomMap<F>,
    pub true_pose: Pose<F>,
    pub beams: Vec<BeamSpec<F>>,
    pub grid: GridSpec<F>,
    pub seed: u64,
    /// Use exact geometric ranges instead of sampled ones in single runs.
    /// The likelihood still uses each beam's noise_rms.
    pub noise_free: bool,
}

impl<F: Real> Scenario<F> {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !self.map.contains_interior(&self.true_pose.position()) {
            return Err(Error::InvalidScenario(format!(
                "true pose ({}, {}) is not inside the map",
                self.true_pose.x1, self.true_pose.x2
            )));
        }
        if self.beams.is_empty() {
            return Err(Error::InvalidScenario("scenario has no beams".into()));
        }
        for (i, b) in self.beams.iter().enumerate() {
            if !b.angle_deg.is_finite() {
                return Err(Error::InvalidScenario(format!("beam {}: angle must be finite", i + 1)));
            }
            if !(b.noise_rms > F::zero() && b.noise_rms.is_finite()) {
                return Err(Error::InvalidScenario(format!(
                    "beam {}: noise_rms must be positive and finite",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Per-subset posterior RMS values.
#[derive(Clone, Debug, PartialEq)]
pub struct ComboRow<F> {
    pub subset: Vec<usize>,
    pub rms_x1: F,
    pub rms_x2: F,
}

impl<F> ComboRow<F> {
    /// Subset as "1+3"-style text.
    pub fn label(&self) -> String {
        self.subset.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
    }
}

/// Posterior RMS per measurement subset, one row per requested subset.
#[derive(Clone, Debug, PartialEq)]
pub struct ComboTable<F> {
    pub rows: Vec<ComboRow<F>>,
}

/// Monte-Carlo estimate of the unconditional error covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct UnconditionalCov<F> {
    /// Average of e * e^T over completed trials, e = true state - estimate.
    pub matrix: SymMatrix<F>,
    /// Average of the per-trial conditional covariances. For an exact MMSE
    /// estimator this matches `matrix` in expectation.
    pub mean_conditional_cov: SymMatrix<F>,
    /// Requested trial count.
    pub trials: usize,
    /// Trials dropped because the posterior degenerated.
    pub skipped: usize,
}

/// Realizes every beam of the scenario from `true_pose` in order, so one rng
/// yields the same readings no matter which subset is used afterwards.
fn realize_all_beams<F: Real, R: Rng + ?Sized>(
    s: &Scenario<F>,
    true_pose: &Pose<F>,
    rng: &mut R,
    always_sample_noise: bool,
) -> Result<Vec<BeamMeasurement<F>>> {
    let body_relative = s.grid.nk > 1;
    s.beams
        .iter()
        .map(|b| {
            let absolute = if body_relative {
                true_pose.heading_deg + b.angle_deg
            } else {
                b.angle_deg
            };
            let sim_noise = if s.noise_free && !always_sample_noise { F::zero() } else { b.noise_rms };
            let m = simulate_measurement(&s.map, true_pose, absolute, sim_noise, rng)?;
            let stored_angle =
                if body_relative { normalize_degrees(b.angle_deg) } else { m.angle_deg };
            Ok(BeamMeasurement { angle_deg: stored_angle, range: m.range, noise_rms: b.noise_rms })
        })
        .collect()
}

fn validate_subset(subset: &[usize], n_beams: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("subset must name at least one beam".into()));
    }
    for &i in subset {
        if i < 1 || i > n_beams {
            return Err(Error::InvalidSubset(format!(
                "beam {i} out of range; the scenario has {n_beams} beams (numbered from 1)"
            )));
        }
    }
    Ok(())
}

fn select<F: Copy>(all: &[BeamMeasurement<F>], subset: &[usize]) -> Vec<BeamMeasurement<F>> {
    subset.iter().map(|&i| all[i - 1]).collect()
}

/// Runs one estimation pass: realize the scenario's beams, keep the 1-based
/// `subset`, apply a single Bayes update to the uniform prior.
/// Deterministic in (scenario, subset): the rng is reseeded per call and all
/// beams are realized before subsetting.
pub fn run_scenario<F: Real>(
    s: &Scenario<F>,
    subset: &[usize],
) -> Result<(EstimateReport<F>, WeightGrid<F>)> {
    s.validate()?;
    validate_subset(subset, s.beams.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let all = realize_all_beams(s, &s.true_pose, &mut rng, false)?;
    let chosen = select(&all, subset);
    let prior = uniform_prior(&s.grid, &s.map)?;
    let posterior = update(&prior, &chosen, &s.map)?;
    let report = posterior.estimate_report(chosen.len());
    Ok((report, posterior))
}

/// Posterior RMS for several measurement subsets of one scenario. All rows
/// share the same measurement realizations, so they compare like for like.
pub fn combo_study<F: Real>(s: &Scenario<F>, subsets: &[Vec<usize>]) -> Result<ComboTable<F>> {
    if subsets.is_empty() {
        return Err(Error::InvalidSubset("at least one subset is required".into()));
    }
    let rows = subsets
        .iter()
        .map(|sub| {
            let (report, _) = run_scenario(s, sub)?;
            Ok(ComboRow { subset: sub.clone(), rms_x1: report.rms[0], rms_x2: report.rms[1] })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComboTable { rows })
}

/// Monte-Carlo unconditional covariance: each trial draws a true position
/// uniformly over the room interior (and, on nk > 1 grids, a uniform
/// heading), samples noisy readings, runs the filter, and records the
/// estimation error and conditional covariance.
///
/// Noise is always sampled here, whatever `noise_free` says; an error
/// covariance of noiseless runs would not be comparable to the conditional
/// one. Trial t draws from rng stream t of the scenario seed, so results are
/// independent of execution order and thread count. Degenerate-posterior
/// trials are skipped and counted; averages are over completed trials.
pub fn monte_carlo_covariance<F: Real>(
    s: &Scenario<F>,
    subset: &[usize],
    trials: usize,
) -> Result<UnconditionalCov<F>> {
    s.validate()?;
    validate_subset(subset, s.beams.len())?;
    if trials < 1 {
        return Err(Error::InvalidTrials { trials });
    }
    let dim = s.grid.state_dim();
    let per_trial: Vec<Option<(SymMatrix<F>, SymMatrix<F>)>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<(SymMatrix<F>, SymMatrix<F>)>> {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            rng.set_stream(t as u64);
            let true_pose = draw_interior_pose(&s.map, &s.grid, &mut rng)?;
            let all = realize_all_beams(s, &true_pose, &mut rng, true)?;
            let chosen = select(&all, subset);
            let prior = uniform_prior(&s.grid, &s.map)?;
            let posterior = match update(&prior, &chosen, &s.map) {
                Ok(p) => p,
                Err(Error::DegeneratePosterior) => return Ok(None),
                Err(e) => return Err(e),
            };
            let report = posterior.estimate_report(chosen.len());
            let mut e = [true_pose.x1 - report.mean.x1, true_pose.x2 - report.mean.x2, F::zero()];
            if let Some(mean_k) = report.mean.heading_deg {
                e[2] = wrap_degrees_pm180(true_pose.heading_deg - mean_k);
            }
            let mut err = SymMatrix::zeros(dim);
            err.add_weighted_outer(F::one(), e);
            Ok(Some((err, report.covariance)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut matrix = SymMatrix::zeros(dim);
    let mut cond = SymMatrix::zeros(dim);
    let mut completed = 0usize;
    for pair in per_trial.iter().flatten() {
        matrix.add_scaled(&pair.0, F::one());
        cond.add_scaled(&pair.1, F::one());
        completed += 1;
    }
    if completed == 0 {
        return Err(Error::DegeneratePosterior);
    }
    let inv = F::one() / F::from_usize(completed).unwrap_or_else(F::nan);
    matrix.scale(inv);
    cond.scale(inv);
    Ok(UnconditionalCov { matrix, mean_conditional_cov: cond, trials, skipped: trials - completed })
}

/// Rejection-samples a position uniform over the interior; the heading is
/// the grid's known heading on nk = 1 grids and uniform on [0, 360) otherwise.
fn draw_interior_pose<F: Real, R: Rng + ?Sized>(
    map: &RoomMap<F>,
    grid: &GridSpec<F>,
    rng: &mut R,
) -> Result<Pose<F>> {
    let bb = map.bounding_box();
    for _ in 0..100_000 {
        let x1 = bb.x1_min + F::unit_uniform(rng) * bb.x1_extent();
        let x2 = bb.x2_min + F::unit_uniform(rng) * bb.x2_extent();
        if map.contains_interior(&Point2::new(x1, x2)) {
            let heading = if grid.nk > 1 {
                F::unit_uniform(rng) * F::cast(360.0)
            } else {
                grid.known_heading_deg
            };
            return Ok(Pose::new(x1, x2, heading));
        }
    }
    Err(Error::InvalidScenario("could not sample a pose inside the map interior".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_rectangle;

    fn example_scenario(n1: usize, n2: usize, noise_free: bool) -> Scenario<f64> {
        let map = make_rectangle(4.0, 6.0).unwrap();
        let grid = GridSpec::for_map(&map, n1, n2, 1, 20.0).unwrap();
        Scenario {
            map,
            true_pose: Pose::new(2.0, 3.0, 20.0),
            beams: vec![
                BeamSpec { angle_deg: 326.3, noise_rms: 0.05 },
                BeamSpec { angle_deg: 0.0, noise_rms: 0.05 },
                BeamSpec { angle_deg: 33.7, noise_rms: 0.05 },
            ],
            grid,
            seed: 2468,
            noise_free,
        }
    }

    #[test]
    fn repeated_runs_are_identical() {
        let s = example_scenario(30, 45, false);
        let (r1, g1) = run_scenario(&s, &[1, 2, 3]).unwrap();
        let (r2, g2) = run_scenario(&s, &[1, 2, 3]).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(g1.log_weights(), g2.log_weights());
    }

    #[test]
    fn subset_errors_are_addressed() {
        let s = example_scenario(10, 15, true);
        assert!(matches!(run_scenario(&s, &[]), Err(Error::InvalidSubset(_))));
        match run_scenario(&s, &[9]) {
            Err(Error::InvalidSubset(msg)) => assert!(msg.contains("beam 9"), "{msg}"),
            other => panic!("expected subset error, got {other:?}"),
        }
    }

    #[test]
    fn scenario_validation_catches_bad_configs() {
        let mut s = example_scenario(10, 15, true);
        s.true_pose = Pose::new(5.0, 3.0, 0.0);
        assert!(matches!(run_scenario(&s, &[1]), Err(Error::InvalidScenario(_))));
        let mut s = example_scenario(10, 15, true);
        s.beams.clear();
        assert!(matches!(run_scenario(&s, &[1]), Err(Error::InvalidScenario(_))));
        let mut s = example_scenario(10, 15, true);
        s.beams[0].noise_rms = 0.0;
        assert!(matches!(run_scenario(&s, &[1]), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn perpendicular_beam_pins_x2_only() {
        let s = example_scenario(100, 150, true);
        let (report, _) = run_scenario(&s, &[2]).unwrap();
        assert!((report.rms[1] - 0.05).abs() < 0.01, "rms_x2 {}", report.rms[1]);
        // x1 stays at the prior spread of a 4 m uniform.
        assert!((report.rms[0] - 1.1547).abs() < 0.02, "rms_x1 {}", report.rms[0]);
        assert!((report.mean.x2 - 3.0).abs() < 0.01);
    }

    #[test]
    fn combo_rows_ignore_subset_order() {
        let s = example_scenario(40, 60, true);
        let table = combo_study(&s, &[vec![1, 3], vec![3, 1]]).unwrap();
        assert_eq!(table.rows[0].rms_x1, table.rows[1].rms_x1);
        assert_eq!(table.rows[0].rms_x2, table.rows[1].rms_x2);
        assert_eq!(table.rows[0].label(), "1+3");
        assert_eq!(table.rows[1].label(), "3+1");
        assert!(matches!(combo_study(&s, &[]), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn single_trial_covariance_is_an_outer_product() {
        let s = example_scenario(30, 45, false);
        let mc = monte_carlo_covariance(&s, &[1, 2, 3], 1).unwrap();
        assert_eq!(mc.trials, 1);
        assert_eq!(mc.skipped, 0);
        let m = &mc.matrix;
        let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(0, 1);
        // Rank one: zero determinant up to rounding.
        assert!(det.abs() <= 1e-12 * (m.get(0, 0) * m.get(1, 1)).abs() + 1e-300, "det {det}");
        assert!(matches!(
            monte_carlo_covariance(&s, &[1], 0),
            Err(Error::InvalidTrials { trials: 0 })
        ));
    }

    #[test]
    fn monte_carlo_is_reproducible_and_psd() {
        let s = example_scenario(25, 35, false);
        let a = monte_carlo_covariance(&s, &[1, 2], 12).unwrap();
        let b = monte_carlo_covariance(&s, &[1, 2], 12).unwrap();
        assert_eq!(a, b);
        assert!(a.matrix.min_eigenvalue() > -1e-10);
        assert!(a.mean_conditional_cov.min_eigenvalue() > -1e-10);
        assert_eq!(a.skipped, 0);
    }

    #[test]
    fn unknown_heading_study_produces_a_3d_covariance() {
        let map = make_rectangle(4.0, 6.0).unwrap();
        let grid = GridSpec::for_map(&map, 15, 20, 8, 0.0).unwrap();
        let s = Scenario {
            map,
            true_pose: Pose::new(2.0, 3.0, 90.0),
            beams: vec![
                BeamSpec { angle_deg: 0.0, noise_rms: 0.05 },
                BeamSpec { angle_deg: 90.0, noise_rms: 0.05 },
            ],
            grid,
            seed: 99,
            noise_free: false,
        };
        let mc = monte_carlo_covariance(&s, &[1, 2], 8).unwrap();
        assert_eq!(mc.matrix.dim(), 3);
        assert!(mc.matrix.min_eigenvalue() > -1e-10);
        let (report, _) = run_scenario(&s, &[1, 2]).unwrap();
        assert!(report.mean.heading_deg.is_some());
        assert_eq!(report.rms.len(), 3);
    }
}
