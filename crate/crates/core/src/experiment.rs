//! The evaluation grid: random instances over a range of polygon sizes and
//! point counts, several polygons per configuration and several runs per
//! polygon, for each algorithm version. Rows go to CSV; the four summary
//! views average best fitness by sides and by points.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io;

use rayon::prelude::*;
use thiserror::Error;

use crate::ga::{run_ga, GaConfig, Version};
use crate::instance::{generate_instance, GenSpec, Instance, InstanceError, DEFAULT_BOX};
use crate::seed::derive_seed;

pub const CSV_HEADER: [&str; 11] = [
    "sides",
    "points",
    "polygon_id",
    "run_id",
    "version",
    "best_f",
    "best_c1",
    "best_c2",
    "generations_used",
    "wall_ms",
    "seed",
];

const ERROR_PREFIX: &str = "error:";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<csv::Error> for ExperimentError {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line());
        ExperimentError::Csv { line, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub sides_list: Vec<usize>,
    pub points_list: Vec<usize>,
    pub polygons_per_config: usize,
    pub runs_per_instance: usize,
    pub versions: Vec<Version>,
    pub base_seed: u64,
    pub bounding_box: i64,
    pub generation_cap: usize,
    /// When false, `wall_ms` is written as 0 so reruns are byte-identical.
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn new(base_seed: u64) -> Self {
        ExperimentSpec {
            sides_list: vec![10, 15, 20, 25],
            points_list: vec![5, 10, 15, 20, 25, 30],
            polygons_per_config: 5,
            runs_per_instance: 5,
            versions: vec![Version::V1, Version::V2],
            base_seed,
            bounding_box: DEFAULT_BOX,
            generation_cap: 1000,
            record_timing: true,
        }
    }

    pub fn check(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Spec(m.to_string()));
        if self.sides_list.is_empty() || self.points_list.is_empty() || self.versions.is_empty() {
            return bad("sides, points and versions lists must be non-empty");
        }
        if self.sides_list.iter().any(|&m| m < 3) {
            return bad("every sides value must be >= 3");
        }
        if self.points_list.iter().any(|&n| n < 3) {
            return bad("every points value must be >= 3");
        }
        if self.polygons_per_config == 0 || self.runs_per_instance == 0 {
            return bad("polygon and run counts must be >= 1");
        }
        Ok(())
    }

    /// Total number of CSV rows the grid produces.
    pub fn cardinality(&self) -> usize {
        self.sides_list.len()
            * self.points_list.len()
            * self.polygons_per_config
            * self.runs_per_instance
            * self.versions.len()
    }

    /// Cells in output order: sides, points, polygon, run, version.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.cardinality());
        for &sides in &self.sides_list {
            for &points in &self.points_list {
                for polygon_id in 0..self.polygons_per_config {
                    for run_id in 0..self.runs_per_instance {
                        for &version in &self.versions {
                            out.push(Cell { sides, points, polygon_id, run_id, version });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub sides: usize,
    pub points: usize,
    pub polygon_id: usize,
    pub run_id: usize,
    pub version: Version,
}

pub fn instance_seed(base_seed: u64, sides: usize, points: usize, polygon_id: usize) -> u64 {
    derive_seed(base_seed, &[sides as u64, points as u64, polygon_id as u64])
}

pub fn run_seed(base_seed: u64, cell: &Cell) -> u64 {
    derive_seed(
        base_seed,
        &[
            cell.sides as u64,
            cell.points as u64,
            cell.polygon_id as u64,
            cell.run_id as u64,
            u64::from(cell.version.number()),
        ],
    )
}

/// Regenerates the instance a cell was solved on.
pub fn cell_instance(spec: &ExperimentSpec, sides: usize, points: usize, polygon_id: usize) -> Result<Instance, InstanceError> {
    let seed = instance_seed(spec.base_seed, sides, points, polygon_id);
    generate_instance(&GenSpec::new(sides, points, seed).with_box(spec.bounding_box))
}

/// Solver configuration for one cell.
pub fn cell_config(spec: &ExperimentSpec, cell: &Cell) -> GaConfig {
    GaConfig::for_version(cell.version, run_seed(spec.base_seed, cell)).with_generations(spec.generation_cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub best_f: u32,
    pub best_c1: u32,
    pub best_c2: u32,
    pub generations_used: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub sides: usize,
    pub points: usize,
    pub polygon_id: usize,
    pub run_id: usize,
    pub version: Version,
    pub outcome: Result<Outcome, String>,
    pub seed: u64,
}

pub fn run_cell(spec: &ExperimentSpec, cell: &Cell) -> ExperimentRecord {
    let config = cell_config(spec, cell);
    let outcome = cell_instance(spec, cell.sides, cell.points, cell.polygon_id)
        .map_err(|e| e.to_string())
        .and_then(|inst| run_ga(&inst, &config).map_err(|e| e.to_string()))
        .map(|r| Outcome {
            best_f: r.best_fitness.f(),
            best_c1: r.best_fitness.c1,
            best_c2: r.best_fitness.c2,
            generations_used: r.generations_used,
            wall_ms: if spec.record_timing { r.wall_time.as_millis() as u64 } else { 0 },
        });
    ExperimentRecord {
        sides: cell.sides,
        points: cell.points,
        polygon_id: cell.polygon_id,
        run_id: cell.run_id,
        version: cell.version,
        outcome,
        seed: config.seed,
    }
}

/// Runs every cell (concurrently) and returns rows in grid order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    spec.check()?;
    Ok(spec.cells().par_iter().map(|c| run_cell(spec, c)).collect())
}

pub fn write_csv<W: io::Write>(records: &[ExperimentRecord], w: W) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        let (f, c1, c2, g, ms) = match &r.outcome {
            Ok(o) => (
                o.best_f.to_string(),
                o.best_c1.to_string(),
                o.best_c2.to_string(),
                o.generations_used.to_string(),
                o.wall_ms.to_string(),
            ),
            Err(msg) => (format!("{ERROR_PREFIX}{msg}"), String::new(), String::new(), String::new(), String::new()),
        };
        out.write_record([
            r.sides.to_string(),
            r.points.to_string(),
            r.polygon_id.to_string(),
            r.run_id.to_string(),
            r.version.to_string(),
            f,
            c1,
            c2,
            g,
            ms,
            r.seed.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(r: R) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(ExperimentError::Csv { line: 1, message: "unexpected header".into() });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| -> Result<u64, ExperimentError> {
            field(i).parse().map_err(|_| ExperimentError::Csv {
                line,
                message: format!("column {} is not an integer: '{}'", CSV_HEADER[i], field(i)),
            })
        };
        let version = field(4)
            .parse::<Version>()
            .map_err(|message| ExperimentError::Csv { line, message })?;
        let outcome = match field(5).strip_prefix(ERROR_PREFIX) {
            Some(msg) => Err(msg.to_string()),
            None => Ok(Outcome {
                best_f: num(5)? as u32,
                best_c1: num(6)? as u32,
                best_c2: num(7)? as u32,
                generations_used: num(8)? as usize,
                wall_ms: num(9)?,
            }),
        };
        out.push(ExperimentRecord {
            sides: num(0)? as usize,
            points: num(1)? as usize,
            polygon_id: num(2)? as usize,
            run_id: num(3)? as usize,
            version,
            outcome,
            seed: num(10)?,
        });
    }
    Ok(out)
}

/// An exact running mean: integer sum over integer count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Mean {
    pub sum: u64,
    pub count: u64,
}

impl Mean {
    pub fn add(&mut self, v: u32) {
        self.sum += u64::from(v);
        self.count += 1;
    }

    pub fn value(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum as f64 / self.count as f64)
    }
}

impl fmt::Display for Mean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v:.3} ({}/{})", self.sum, self.count),
            None => f.write_str("-"),
        }
    }
}

/// One aggregate table: mean best fitness per version for each key value.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateView {
    pub title: String,
    pub key_name: &'static str,
    pub rows: BTreeMap<usize, BTreeMap<Version, Mean>>,
}

impl AggregateView {
    pub fn mean(&self, key: usize, version: Version) -> Option<Mean> {
        self.rows.get(&key).and_then(|r| r.get(&version)).copied()
    }
}

fn group_means(
    records: &[ExperimentRecord],
    filter: impl Fn(&ExperimentRecord) -> bool,
    key: impl Fn(&ExperimentRecord) -> usize,
) -> BTreeMap<usize, BTreeMap<Version, Mean>> {
    let mut rows: BTreeMap<usize, BTreeMap<Version, Mean>> = BTreeMap::new();
    for r in records.iter().filter(|r| filter(r)) {
        if let Ok(o) = &r.outcome {
            rows.entry(key(r)).or_default().entry(r.version).or_default().add(o.best_f);
        }
    }
    rows
}

/// Mean best fitness per `(sides, points, version)` configuration.
pub fn config_means(records: &[ExperimentRecord]) -> BTreeMap<(usize, usize, Version), Mean> {
    let mut out: BTreeMap<(usize, usize, Version), Mean> = BTreeMap::new();
    for r in records {
        if let Ok(o) = &r.outcome {
            out.entry((r.sides, r.points, r.version)).or_default().add(o.best_f);
        }
    }
    out
}

fn preferred(list: &[usize], wanted: usize) -> usize {
    if list.contains(&wanted) {
        wanted
    } else {
        *list.last().expect("non-empty list")
    }
}

/// The four summary views: by sides at a fixed point count, by points at a
/// fixed side count, and the two marginals. The fixed values are 20 when the
/// grid contains 20, otherwise the largest listed value.
pub fn aggregate_views(spec: &ExperimentSpec, records: &[ExperimentRecord]) -> Vec<AggregateView> {
    let fixed_points = preferred(&spec.points_list, 20);
    let fixed_sides = preferred(&spec.sides_list, 20);
    vec![
        AggregateView {
            title: format!("mean best_f by sides, {fixed_points} points"),
            key_name: "sides",
            rows: group_means(records, |r| r.points == fixed_points, |r| r.sides),
        },
        AggregateView {
            title: format!("mean best_f by points, {fixed_sides} sides"),
            key_name: "points",
            rows: group_means(records, |r| r.sides == fixed_sides, |r| r.points),
        },
        AggregateView {
            title: "mean best_f by sides, all point counts".to_string(),
            key_name: "sides",
            rows: group_means(records, |_| true, |r| r.sides),
        },
        AggregateView {
            title: "mean best_f by points, all side counts".to_string(),
            key_name: "points",
            rows: group_means(records, |_| true, |r| r.points),
        },
    ]
}

pub fn format_views(views: &[AggregateView], versions: &[Version]) -> String {
    let mut s = String::new();
    for v in views {
        let _ = writeln!(s, "== {}", v.title);
        let _ = write!(s, "{:>8}", v.key_name);
        for ver in versions {
            let _ = write!(s, "  {:>22}", format!("v{ver}"));
        }
        s.push('\n');
        for (key, row) in &v.rows {
            let _ = write!(s, "{key:>8}");
            for ver in versions {
                let cell = row.get(ver).map_or_else(|| "-".to_string(), |m| m.to_string());
                let _ = write!(s, "  {cell:>22}");
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}
