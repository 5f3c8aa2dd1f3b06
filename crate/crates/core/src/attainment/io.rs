//! File formats of the attainment engine.
//!
//! * Trajectory CSV: header `run,evaluations,quality`, one sample per row.
//!   Rows need not be filtered or sorted; reading keeps the strict
//!   improvements of each run.
//! * Level-set JSON: one [`LevelExport`] object per group.
//! * Histogram CSV: `#`-prefixed header lines recording each axis, then
//!   `t_bucket,q_bucket,count` rows.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::logging::CellKey;
use crate::problems::Direction;

use super::{AttainmentError, AttainmentPoint, Axis, Histogram, LevelSet, Trajectory};

#[derive(Debug, Deserialize, Serialize)]
struct SampleRow {
    run: usize,
    evaluations: u64,
    quality: f64,
}

/// Reads a trajectory CSV into strict staircases keyed by run id.
pub fn read_trajectories<R: Read>(
    reader: R,
    direction: Direction,
) -> Result<BTreeMap<usize, Trajectory>, AttainmentError> {
    let mut samples: BTreeMap<usize, Vec<(u64, f64)>> = BTreeMap::new();
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for row in csv.deserialize() {
        let row: SampleRow = row?;
        samples
            .entry(row.run)
            .or_default()
            .push((row.evaluations, row.quality));
    }
    samples
        .into_iter()
        .map(|(run, s)| Ok((run, Trajectory::from_samples(direction, s)?)))
        .collect()
}

/// Writes trajectories in the format read by [`read_trajectories`].
pub fn write_trajectories<'a, W: Write>(
    mut writer: W,
    runs: impl IntoIterator<Item = (usize, &'a Trajectory)>,
) -> Result<(), AttainmentError> {
    writeln!(writer, "run,evaluations,quality")?;
    for (run, t) in runs {
        for p in t.points() {
            writeln!(writer, "{run},{},{}", p.time, p.quality)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupMeta {
    pub suite: String,
    pub problem: u32,
    pub dimension: usize,
    pub instance: u32,
}

impl From<&CellKey> for GroupMeta {
    fn from(cell: &CellKey) -> Self {
        Self {
            suite: cell.suite_name.clone(),
            problem: cell.problem_id,
            dimension: cell.dimension,
            instance: cell.instance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: usize,
    pub points: Vec<(u64, f64)>,
}

/// JSON form of the level sets of one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelExport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group: Option<GroupMeta>,
    pub direction: Direction,
    pub runs: usize,
    pub nadir: (u64, f64),
    pub levels: Vec<LevelEntry>,
}

impl LevelExport {
    pub fn new(
        group: Option<GroupMeta>,
        runs: usize,
        nadir: AttainmentPoint,
        levels: &[LevelSet],
    ) -> Self {
        Self {
            group,
            direction: levels
                .first()
                .map_or(Direction::Minimization, |l| l.direction),
            runs,
            nadir: (nadir.time, nadir.quality),
            levels: levels
                .iter()
                .map(|l| LevelEntry {
                    level: l.level,
                    points: l.points.iter().map(|p| (p.time, p.quality)).collect(),
                })
                .collect(),
        }
    }
}

fn write_axis<W: Write>(w: &mut W, name: &str, axis: &Axis) -> std::io::Result<()> {
    writeln!(
        w,
        "# {name}: buckets={} origin={} extent={} scale={}",
        axis.buckets(),
        axis.origin(),
        axis.extent(),
        axis.scale()
    )
}

pub fn write_histogram<W: Write>(mut writer: W, h: &Histogram) -> Result<(), AttainmentError> {
    let d = h.discretization();
    write_axis(&mut writer, "time", &d.time)?;
    write_axis(&mut writer, "quality", &d.quality)?;
    writeln!(writer, "# runs={} direction={}", h.runs(), h.direction())?;
    writeln!(writer, "t_bucket,q_bucket,count")?;
    for (bt, bq, c) in h.cells() {
        writeln!(writer, "{bt},{bq},{c}")?;
    }
    Ok(())
}
