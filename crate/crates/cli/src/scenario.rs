//! Scenario file format: a line-oriented text description of one experiment.
//!
//! Sections in brackets, one `key value...` pair per line, `#` comments:
//!
//! ```text
//! [map]
//! rectangle 4 6        # or one "vertex x1 x2" line per corner, counterclockwise
//! [pose]
//! x1 2
//! x2 3
//! heading 20
//! [beams]
//! beam 326.3 0.05      # angle_deg noise_rms_m
//! [grid]
//! n1 200
//! n2 300
//! nk 1                 # optional, default 1
//! bounds 0 4 0 6       # optional, default map bounding box
//! [seed]
//! seed 2468            # optional, default 0
//! noise_free true      # optional, default false
//! [outputs]
//! export_grid false    # all optional
//! heatmap false
//! out_dir results
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use roomloc::filter::GridSpec;
use roomloc::geometry::{Bounds2, Point2, Pose, RoomMap};
use roomloc::{BeamSpec, Scenario};

/// Output switches carried in the file; command-line flags extend them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputOptions {
    pub export_grid: bool,
    pub heatmap: bool,
    pub out_dir: Option<PathBuf>,
}

/// Parsed scenario plus its output options.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub outputs: OutputOptions,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Map,
    Pose,
    Beams,
    Grid,
    Seed,
    Outputs,
}

#[derive(Default)]
struct Draft {
    rectangle: Option<(f64, f64)>,
    vertices: Vec<Point2<f64>>,
    x1: Option<f64>,
    x2: Option<f64>,
    heading: Option<f64>,
    beams: Vec<BeamSpec>,
    n1: Option<usize>,
    n2: Option<usize>,
    nk: Option<usize>,
    bounds: Option<Bounds2<f64>>,
    seed: Option<u64>,
    noise_free: Option<bool>,
    outputs: OutputOptions,
}

fn parse_num<T: std::str::FromStr>(line_no: usize, key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("line {line_no}: {key}: cannot parse number from \"{value}\""))
}

fn parse_bool(line_no: usize, key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("line {line_no}: {key}: expected true or false, got \"{other}\"")),
    }
}

fn set_once<T>(slot: &mut Option<T>, v: T, line_no: usize, key: &str) -> Result<(), String> {
    if slot.is_some() {
        return Err(format!("line {line_no}: duplicate key {key}"));
    }
    *slot = Some(v);
    Ok(())
}

/// Parses scenario text. Errors name the offending line and field.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, String> {
    let mut section: Option<Section> = None;
    let mut d = Draft::default();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| format!("line {line_no}: unterminated section header"))?;
            section = Some(match name {
                "map" => Section::Map,
                "pose" => Section::Pose,
                "beams" => Section::Beams,
                "grid" => Section::Grid,
                "seed" => Section::Seed,
                "outputs" => Section::Outputs,
                other => return Err(format!("line {line_no}: unknown section [{other}]")),
            });
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let key = fields[0];
        let args = &fields[1..];
        let expect = |n: usize| -> Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("line {line_no}: {key} takes {n} value(s), got {}", args.len()))
            }
        };
        let sec = section
            .ok_or_else(|| format!("line {line_no}: \"{key}\" appears before any [section]"))?;
        match (sec, key) {
            (Section::Map, "rectangle") => {
                expect(2)?;
                if !d.vertices.is_empty() {
                    return Err(format!(
                        "line {line_no}: rectangle cannot be combined with vertex lines"
                    ));
                }
                let l1 = parse_num(line_no, key, args[0])?;
                let l2 = parse_num(line_no, key, args[1])?;
                set_once(&mut d.rectangle, (l1, l2), line_no, key)?;
            }
            (Section::Map, "vertex") => {
                expect(2)?;
                if d.rectangle.is_some() {
                    return Err(format!(
                        "line {line_no}: vertex cannot be combined with a rectangle line"
                    ));
                }
                d.vertices
                    .push(Point2::new(parse_num(line_no, key, args[0])?, parse_num(line_no, key, args[1])?));
            }
            (Section::Pose, "x1") => {
                expect(1)?;
                set_once(&mut d.x1, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Pose, "x2") => {
                expect(1)?;
                set_once(&mut d.x2, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Pose, "heading") => {
                expect(1)?;
                set_once(&mut d.heading, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Beams, "beam") => {
                expect(2)?;
                d.beams.push(BeamSpec {
                    angle_deg: parse_num(line_no, key, args[0])?,
                    noise_rms: parse_num(line_no, key, args[1])?,
                });
            }
            (Section::Grid, "n1") => {
                expect(1)?;
                set_once(&mut d.n1, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Grid, "n2") => {
                expect(1)?;
                set_once(&mut d.n2, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Grid, "nk") => {
                expect(1)?;
                set_once(&mut d.nk, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Grid, "bounds") => {
                expect(4)?;
                let b = Bounds2::new(
                    parse_num(line_no, key, args[0])?,
                    parse_num(line_no, key, args[1])?,
                    parse_num(line_no, key, args[2])?,
                    parse_num(line_no, key, args[3])?,
                );
                set_once(&mut d.bounds, b, line_no, key)?;
            }
            (Section::Seed, "seed") => {
                expect(1)?;
                set_once(&mut d.seed, parse_num(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Seed, "noise_free") => {
                expect(1)?;
                set_once(&mut d.noise_free, parse_bool(line_no, key, args[0])?, line_no, key)?;
            }
            (Section::Outputs, "export_grid") => {
                expect(1)?;
                d.outputs.export_grid = parse_bool(line_no, key, args[0])?;
            }
            (Section::Outputs, "heatmap") => {
                expect(1)?;
                d.outputs.heatmap = parse_bool(line_no, key, args[0])?;
            }
            (Section::Outputs, "out_dir") => {
                expect(1)?;
                d.outputs.out_dir = Some(PathBuf::from(args[0]));
            }
            (_, other) => {
                return Err(format!("line {line_no}: unknown key \"{other}\" in this section"));
            }
        }
    }

    let map: RoomMap<f64> = if let Some((l1, l2)) = d.rectangle {
        roomloc::geometry::make_rectangle(l1, l2).map_err(|e| format!("map: {e}"))?
    } else if !d.vertices.is_empty() {
        RoomMap::new(d.vertices.clone()).map_err(|e| format!("map: {e}"))?
    } else {
        return Err("missing [map] section with a rectangle or vertex lines".into());
    };
    let x1 = d.x1.ok_or("missing x1 in [pose]")?;
    let x2 = d.x2.ok_or("missing x2 in [pose]")?;
    let heading = d.heading.ok_or("missing heading in [pose]")?;
    if d.beams.is_empty() {
        return Err("missing [beams] section with at least one beam".into());
    }
    let n1 = d.n1.ok_or("missing n1 in [grid]")?;
    let n2 = d.n2.ok_or("missing n2 in [grid]")?;
    let bounds = d.bounds.unwrap_or_else(|| map.bounding_box());
    let grid = GridSpec::new(n1, n2, d.nk.unwrap_or(1), bounds, heading)
        .map_err(|e| format!("grid: {e}"))?;
    let scenario = Scenario {
        map,
        true_pose: Pose::new(x1, x2, heading),
        beams: d.beams,
        grid,
        seed: d.seed.unwrap_or(0),
        noise_free: d.noise_free.unwrap_or(false),
    };
    scenario.validate().map_err(|e| format!("scenario: {e}"))?;
    Ok(ScenarioFile { scenario, outputs: d.outputs })
}

/// Canonical text form. Floats use the shortest representation that parses
/// back to the same value, so parse -> serialize -> parse is an identity.
pub fn serialize_scenario(file: &ScenarioFile) -> String {
    let s = &file.scenario;
    let mut out = String::new();
    out.push_str("[map]\n");
    for v in s.map.vertices() {
        let _ = writeln!(out, "vertex {} {}", v.x1, v.x2);
    }
    out.push_str("\n[pose]\n");
    let _ = writeln!(out, "x1 {}", s.true_pose.x1);
    let _ = writeln!(out, "x2 {}", s.true_pose.x2);
    let _ = writeln!(out, "heading {}", s.true_pose.heading_deg);
    out.push_str("\n[beams]\n");
    for b in &s.beams {
        let _ = writeln!(out, "beam {} {}", b.angle_deg, b.noise_rms);
    }
    out.push_str("\n[grid]\n");
    let _ = writeln!(out, "n1 {}", s.grid.n1);
    let _ = writeln!(out, "n2 {}", s.grid.n2);
    let _ = writeln!(out, "nk {}", s.grid.nk);
    let b = &s.grid.bounds;
    let _ = writeln!(out, "bounds {} {} {} {}", b.x1_min, b.x1_max, b.x2_min, b.x2_max);
    out.push_str("\n[seed]\n");
    let _ = writeln!(out, "seed {}", s.seed);
    let _ = writeln!(out, "noise_free {}", s.noise_free);
    out.push_str("\n[outputs]\n");
    let _ = writeln!(out, "export_grid {}", file.outputs.export_grid);
    let _ = writeln!(out, "heatmap {}", file.outputs.heatmap);
    if let Some(dir) = &file.outputs.out_dir {
        let _ = writeln!(out, "out_dir {}", dir.display());
    }
    out
}

/// Reads and parses a scenario file, prefixing errors with the path.
pub fn load_scenario(path: &Path) -> Result<ScenarioFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}
