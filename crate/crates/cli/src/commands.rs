//! File-driven subcommands: trajectory CSV in, level sets, histograms or
//! statistics out.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anytime::attainment::io::{read_trajectories, write_histogram, LevelExport};
use anytime::attainment::{
    default_nadir, eah, surface, volume, AttainmentError, AttainmentPoint, Discretization,
    Levels, Scale, Trajectory,
};
use anytime::Direction;

use crate::CliError;

pub fn load(path: &Path, direction: Direction) -> Result<Vec<Trajectory>, CliError> {
    let file = File::open(path).map_err(|source| CliError::io(path, source))?;
    let runs = read_trajectories(BufReader::new(file), direction)?;
    if runs.is_empty() {
        return Err(CliError::Usage(format!("{} holds no runs", path.display())));
    }
    Ok(runs.into_values().collect())
}

/// Checks zero-based level indices against the number of runs.
pub fn check_levels(indices: &[usize], runs: usize) -> Result<(), CliError> {
    match indices.iter().find(|&&j| j >= runs) {
        Some(j) => Err(CliError::Usage(format!(
            "level index {j} is out of range: the input has m = {runs} runs (valid indices 0..{runs})"
        ))),
        None => Ok(()),
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let mut w = File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::io(path, source))?;
    w.write_all(contents)
        .and_then(|_| w.flush())
        .map_err(|source| CliError::io(path, source))
}

pub fn eaf_export(runs: &[Trajectory], indices: &[usize]) -> Result<LevelExport, CliError> {
    check_levels(indices, runs.len())?;
    let refs: Vec<&Trajectory> = runs.iter().collect();
    let levels = Levels::new(runs[0].direction(), indices.iter().copied()).compute(&refs)?;
    Ok(LevelExport::new(None, runs.len(), default_nadir(runs)?, &levels))
}

pub fn eaf(input: &Path, indices: &[usize], out: &Path, direction: Direction) -> Result<(), CliError> {
    let export = eaf_export(&load(input, direction)?, indices)?;
    let mut json = serde_json::to_vec_pretty(&export).map_err(AttainmentError::from)?;
    json.push(b'\n');
    write_file(out, &json)
}

pub fn eah_file(
    input: &Path,
    buckets: (usize, usize),
    scales: (Scale, Scale),
    out: &Path,
    direction: Direction,
) -> Result<(), CliError> {
    let runs = load(input, direction)?;
    let disc = Discretization::fitted(&runs, buckets, scales)?;
    let mut text = Vec::new();
    write_histogram(&mut text, &eah(&runs, &disc)?)?;
    write_file(out, &text)
}

/// TSV table of per-level surfaces followed by their volume.
pub fn stats_table(
    runs: &[Trajectory],
    nadir: Option<AttainmentPoint>,
    indices: &[usize],
    normalized: bool,
) -> Result<String, CliError> {
    check_levels(indices, runs.len())?;
    let refs: Vec<&Trajectory> = runs.iter().collect();
    let levels = Levels::new(runs[0].direction(), indices.iter().copied()).compute(&refs)?;
    let (nadir, origin) = match nadir {
        Some(n) => (n, "given"),
        None => (default_nadir(runs)?, "default"),
    };
    let mut s = String::new();
    let _ = writeln!(s, "# nadir\t{}\t{}\t{origin}", nadir.time, nadir.quality);
    let _ = writeln!(s, "# runs\t{}\tdirection\t{}", runs.len(), runs[0].direction());
    let _ = writeln!(s, "index\tlevel\tsurface");
    for (j, l) in indices.iter().zip(&levels) {
        let _ = writeln!(s, "{j}\t{}\t{}", l.level, surface(l, &nadir)?);
    }
    let label = if normalized { "volume_normalized" } else { "volume" };
    let _ = writeln!(s, "{label}\t\t{}", volume(&levels, &nadir, normalized)?);
    Ok(s)
}

pub fn stats(
    input: &Path,
    nadir: Option<AttainmentPoint>,
    indices: Option<&[usize]>,
    normalized: bool,
    direction: Direction,
) -> Result<String, CliError> {
    let runs = load(input, direction)?;
    let all: Vec<usize> = (0..runs.len()).collect();
    stats_table(&runs, nadir, indices.unwrap_or(&all), normalized)
}
