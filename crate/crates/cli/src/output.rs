//! Text and image exporters. Every numeric key carries its unit, and all
//! formatting is fixed-width decimal so repeated runs emit identical bytes.

use std::fmt::Write as _;

use roomloc::{ComboTable, EstimateReport, UnconditionalCov, WeightGrid};

/// Axis labels per state dimension, used to name covariance entries.
fn axis_names(dim: usize) -> &'static [&'static str] {
    match dim {
        2 => &["x1", "x2"],
        _ => &["x1", "x2", "k"],
    }
}

/// Unit suffix of one covariance cell: m2, deg2, or the mixed mdeg.
fn cov_unit(i: usize, j: usize, dim: usize) -> &'static str {
    let heading = |a: usize| dim == 3 && a == 2;
    match (heading(i), heading(j)) {
        (false, false) => "m2",
        (true, true) => "deg2",
        _ => "mdeg",
    }
}

/// Key/value report: mean, per-axis RMS, covariance.
pub fn report_text(report: &EstimateReport) -> String {
    let dim = report.covariance.dim();
    let names = axis_names(dim);
    let mut out = String::new();
    let _ = writeln!(out, "measurements_used\t{}", report.n_measurements);
    let _ = writeln!(out, "mean_x1_m\t{:.6}", report.mean.x1);
    let _ = writeln!(out, "mean_x2_m\t{:.6}", report.mean.x2);
    if let Some(k) = report.mean.heading_deg {
        let _ = writeln!(out, "mean_heading_deg\t{k:.6}");
    }
    for (i, name) in names.iter().enumerate() {
        let unit = if dim == 3 && i == 2 { "deg" } else { "m" };
        let _ = writeln!(out, "rms_{name}_{unit}\t{:.6}", report.rms[i]);
    }
    for i in 0..dim {
        for j in i..dim {
            let _ = writeln!(
                out,
                "cov_{}{}_{}\t{:.6}",
                names[i],
                names[j],
                cov_unit(i, j, dim),
                report.covariance.get(i, j)
            );
        }
    }
    out
}

/// Subset comparison in the classic layout: one column per subset, one row
/// per axis RMS.
pub fn table_text(table: &ComboTable) -> String {
    let mut head = String::from("measurements");
    let mut row1 = String::from("rms_x1_m");
    let mut row2 = String::from("rms_x2_m");
    for row in &table.rows {
        let _ = write!(head, "\t{}", row.label());
        let _ = write!(row1, "\t{:.2}", row.rms_x1);
        let _ = write!(row2, "\t{:.2}", row.rms_x2);
    }
    format!("{head}\n{row1}\n{row2}\n")
}

/// Machine-readable subset comparison: one line per subset.
pub fn table_tsv(table: &ComboTable) -> String {
    let mut out = String::from("subset\trms_x1_m\trms_x2_m\n");
    for row in &table.rows {
        let _ = writeln!(out, "{}\t{:.6}\t{:.6}", row.label(), row.rms_x1, row.rms_x2);
    }
    out
}

/// Monte-Carlo study report: error covariance against the mean conditional
/// covariance, plus trial bookkeeping.
pub fn montecarlo_text(mc: &UnconditionalCov) -> String {
    let dim = mc.matrix.dim();
    let names = axis_names(dim);
    let mut out = String::new();
    let _ = writeln!(out, "trials\t{}", mc.trials);
    let _ = writeln!(out, "skipped\t{}", mc.skipped);
    for i in 0..dim {
        for j in i..dim {
            let _ = writeln!(
                out,
                "err_cov_{}{}_{}\t{:.6}",
                names[i],
                names[j],
                cov_unit(i, j, dim),
                mc.matrix.get(i, j)
            );
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let _ = writeln!(
                out,
                "mean_cond_cov_{}{}_{}\t{:.6}",
                names[i],
                names[j],
                cov_unit(i, j, dim),
                mc.mean_conditional_cov.get(i, j)
            );
        }
    }
    for (i, name) in names.iter().enumerate() {
        let unit = if dim == 3 && i == 2 { "deg" } else { "m" };
        let _ = writeln!(out, "err_rms_{name}_{unit}\t{:.6}", mc.matrix.get(i, i).sqrt());
    }
    out
}

/// One-line machine-readable variant of [`montecarlo_text`].
pub fn montecarlo_tsv(mc: &UnconditionalCov) -> String {
    let dim = mc.matrix.dim();
    let names = axis_names(dim);
    let mut head = String::from("trials\tskipped");
    let mut data = format!("{}\t{}", mc.trials, mc.skipped);
    for i in 0..dim {
        for j in i..dim {
            let _ = write!(head, "\terr_cov_{}{}_{}", names[i], names[j], cov_unit(i, j, dim));
            let _ = write!(data, "\t{:.6}", mc.matrix.get(i, j));
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let _ = write!(head, "\tmean_cond_cov_{}{}_{}", names[i], names[j], cov_unit(i, j, dim));
            let _ = write!(data, "\t{:.6}", mc.mean_conditional_cov.get(i, j));
        }
    }
    format!("{head}\n{data}\n")
}

/// Binary PGM (P5) of the position posterior: x1 left to right, x2 bottom
/// to top, the heaviest cell white. Heading grids are marginalized first.
pub fn heatmap_pgm(grid: &WeightGrid) -> Vec<u8> {
    let spec = grid.spec();
    let pw = grid.position_weights();
    let w_max = pw.iter().cloned().fold(0.0_f64, f64::max);
    let mut out = format!("P5\n{} {}\n255\n", spec.n1, spec.n2).into_bytes();
    out.reserve(spec.n1 * spec.n2);
    for l in (0..spec.n2).rev() {
        for j in 0..spec.n1 {
            out.push((pw[l * spec.n1 + j] / w_max * 255.0).round() as u8);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use roomloc::filter::{uniform_prior, update, GridSpec};
    use roomloc::geometry::make_rectangle;
    use roomloc::BeamMeasurement;

    fn posterior(n1: usize, n2: usize) -> WeightGrid {
        let map = make_rectangle(4.0, 6.0).unwrap();
        let spec = GridSpec::for_map(&map, n1, n2, 1, 20.0).unwrap();
        let prior = uniform_prior(&spec, &map).unwrap();
        let beams = [
            BeamMeasurement::new(0.0, 3.0, 0.05).unwrap(),
            BeamMeasurement::new(90.0, 2.0, 0.05).unwrap(),
        ];
        update(&prior, &beams, &map).unwrap()
    }

    #[test]
    fn report_names_units() {
        let report = posterior(30, 45).estimate_report(2);
        let text = report_text(&report);
        assert!(text.contains("mean_x1_m\t"));
        assert!(text.contains("rms_x2_m\t"));
        assert!(text.contains("cov_x1x2_m2\t"));
        assert!(!text.contains("heading"));
    }

    #[test]
    fn heatmap_has_p5_header_and_full_raster() {
        let grid = posterior(30, 45);
        let bytes = heatmap_pgm(&grid);
        assert!(bytes.starts_with(b"P5\n30 45\n255\n"));
        let header_len = b"P5\n30 45\n255\n".len();
        assert_eq!(bytes.len(), header_len + 30 * 45);
        assert_eq!(bytes[header_len..].iter().copied().max(), Some(255));
        // Mass concentrates near (2, 3): the brightest pixel sits mid-image.
        let raster = &bytes[header_len..];
        let peak = raster.iter().enumerate().max_by_key(|(_, &v)| v).unwrap().0;
        let (row, col) = (peak / 30, peak % 30);
        let l = 45 - 1 - row;
        assert!((col as f64 / 30.0 - 0.5).abs() < 0.1, "col {col}");
        assert!((l as f64 / 45.0 - 0.5).abs() < 0.1, "l {l}");
    }

    #[test]
    fn tsv_and_text_tables_share_values() {
        let table = ComboTable {
            rows: vec![
                roomloc::ComboRow { subset: vec![1], rms_x1: 0.6446, rms_x2: 0.9661 },
                roomloc::ComboRow { subset: vec![1, 3], rms_x1: 0.0199, rms_x2: 0.8665 },
            ],
        };
        let text = table_text(&table);
        assert_eq!(
            text,
            "measurements\t1\t1+3\nrms_x1_m\t0.64\t0.02\nrms_x2_m\t0.97\t0.87\n"
        );
        let tsv = table_tsv(&table);
        assert!(tsv.contains("1+3\t0.019900\t0.866500"));
    }
}
