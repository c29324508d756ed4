//! Command-line front end: scenario loading, study dispatch, file outputs.
//!
//! Exit codes: 0 success, 1 runtime failure (computation or output I/O),
//! 2 usage failure (bad flags, unreadable or invalid scenario, bad subset
//! or trial count).

pub mod output;
pub mod scenario;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use roomloc::analysis::{combo_study, monte_carlo_covariance, run_scenario};
use roomloc::Error as CoreError;
use scenario::{load_scenario, ScenarioFile};

#[derive(Parser)]
#[command(
    name = "roomloc",
    version,
    about = "Locates a static object in a mapped room from rangefinder beams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Posterior mean and covariance for one measurement subset
    Estimate {
        /// Scenario file
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated beam numbers, 1-based (default: all beams)
        #[arg(long)]
        subset: Option<String>,
        /// Output directory (default: the scenario's out_dir, else ".")
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write posterior.pgm, a grayscale image of the position posterior
        #[arg(long)]
        heatmap: bool,
        /// Also write posterior_grid.txt with the raw posterior weights
        #[arg(long = "export-grid")]
        export_grid: bool,
    },
    /// Per-axis posterior RMS for the seven canonical subsets of beams 1-3
    Table1 {
        /// Scenario file; needs at least 3 beams
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory (default: the scenario's out_dir, else ".")
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo unconditional error covariance over random true poses
    Montecarlo {
        /// Scenario file
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated beam numbers, 1-based (default: all beams)
        #[arg(long)]
        subset: Option<String>,
        /// Number of Monte-Carlo trials
        #[arg(long)]
        trials: usize,
        /// Output directory (default: the scenario's out_dir, else ".")
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures split by exit code: usage errors are misconfigurations the
/// caller can fix, runtime errors are everything after a valid start.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn classify(e: CoreError) -> CliError {
    match e {
        CoreError::InvalidScenario(_)
        | CoreError::InvalidSubset(_)
        | CoreError::InvalidTrials { .. }
        | CoreError::InvalidBeamIndex { .. }
        | CoreError::InvalidGrid(_)
        | CoreError::InvalidMap(_) => CliError::Usage(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

fn parse_subset(arg: Option<&str>, n_beams: usize) -> Result<Vec<usize>, CliError> {
    match arg {
        None => Ok((1..=n_beams).collect()),
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    CliError::Usage(format!("--subset: \"{}\" is not a beam number", p.trim()))
                })
            })
            .collect(),
    }
}

fn resolve_out_dir(cli_out: Option<PathBuf>, sf: &ScenarioFile) -> Result<PathBuf, CliError> {
    let dir = cli_out
        .or_else(|| sf.outputs.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Estimate { scenario, subset, out, heatmap, export_grid } => {
            let sf = load_scenario(&scenario).map_err(CliError::Usage)?;
            let subset = parse_subset(subset.as_deref(), sf.scenario.beams.len())?;
            let (report, posterior) = run_scenario(&sf.scenario, &subset).map_err(classify)?;
            let dir = resolve_out_dir(out, &sf)?;
            let text = output::report_text(&report);
            write_file(&dir, "report.txt", text.as_bytes())?;
            if export_grid || sf.outputs.export_grid {
                let mut buf = Vec::new();
                posterior
                    .write_grid_text(&mut buf)
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
                write_file(&dir, "posterior_grid.txt", &buf)?;
            }
            if heatmap || sf.outputs.heatmap {
                write_file(&dir, "posterior.pgm", &output::heatmap_pgm(&posterior))?;
            }
            print!("{text}");
            Ok(())
        }
        Cmd::Table1 { scenario, out } => {
            let sf = load_scenario(&scenario).map_err(CliError::Usage)?;
            if sf.scenario.beams.len() < 3 {
                return Err(CliError::Usage(format!(
                    "this command compares subsets of beams 1-3; the scenario has {} beam(s)",
                    sf.scenario.beams.len()
                )));
            }
            let subsets: Vec<Vec<usize>> = vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![2, 3],
                vec![1, 3],
                vec![1, 2, 3],
            ];
            let table = combo_study(&sf.scenario, &subsets).map_err(classify)?;
            let dir = resolve_out_dir(out, &sf)?;
            let text = output::table_text(&table);
            write_file(&dir, "table1.txt", text.as_bytes())?;
            write_file(&dir, "table1.tsv", output::table_tsv(&table).as_bytes())?;
            print!("{text}");
            Ok(())
        }
        Cmd::Montecarlo { scenario, subset, trials, out } => {
            let sf = load_scenario(&scenario).map_err(CliError::Usage)?;
            let subset = parse_subset(subset.as_deref(), sf.scenario.beams.len())?;
            let mc = monte_carlo_covariance(&sf.scenario, &subset, trials).map_err(classify)?;
            let dir = resolve_out_dir(out, &sf)?;
            let text = output::montecarlo_text(&mc);
            write_file(&dir, "montecarlo.txt", text.as_bytes())?;
            write_file(&dir, "montecarlo.tsv", output::montecarlo_tsv(&mc).as_bytes())?;
            print!("{text}");
            Ok(())
        }
    }
}
