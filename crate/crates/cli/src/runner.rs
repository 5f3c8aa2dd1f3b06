//! The benchmark loop: every cell of the suite, `runs` runs per cell,
//! `budget` evaluations per run, with a problem reset after each run.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use anytime::attainment::io::{write_histogram, write_trajectories, GroupMeta, LevelExport};
use anytime::attainment::{default_nadir, eah, Discretization, EafLogger, Levels, Scale};
use anytime::logging::{self, cell_file_name, FlatFile, Store, Watcher};
use anytime::problems::{instance_seed, splitmix64};
use anytime::properties::{Field, Property};
use anytime::triggers::Always;
use anytime::{MetaData, Suite, SuiteKind};
use parking_lot::Mutex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::solvers::SolverKind;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LoggerSpec {
    Eaf,
    Eah {
        buckets: (usize, usize),
        scales: (Scale, Scale),
    },
    Store,
    FlatFile,
}

impl FromStr for LoggerSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eaf" => Ok(LoggerSpec::Eaf),
            "eah" => Ok(LoggerSpec::Eah {
                buckets: (20, 20),
                scales: (Scale::Linear, Scale::Linear),
            }),
            "store" => Ok(LoggerSpec::Store),
            "flatfile" => Ok(LoggerSpec::FlatFile),
            other => Err(format!(
                "unknown logger `{other}` (expected eaf, eah, store or flatfile)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub suite: SuiteKind,
    pub problems: Vec<u32>,
    pub instances: Vec<u32>,
    pub dimensions: Vec<usize>,
    pub runs: usize,
    pub budget: u64,
    pub solver: SolverKind,
    pub seed: u64,
    pub loggers: Vec<LoggerSpec>,
    /// Zero-based level indices exported by the EAF logger; defaults to
    /// best, median and worst.
    pub levels: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.runs == 0 {
            return Err(CliError::Usage("--runs must be >= 1".into()));
        }
        if self.budget == 0 {
            return Err(CliError::Usage("--budget must be >= 1".into()));
        }
        let writes_files = self
            .loggers
            .iter()
            .any(|l| !matches!(l, LoggerSpec::Store));
        if writes_files && self.out.is_none() {
            return Err(CliError::Usage(
                "--out is required by the eaf, eah and flatfile loggers".into(),
            ));
        }
        if let Some(bad) = self
            .levels
            .iter()
            .flatten()
            .find(|&&j| j >= self.runs)
        {
            return Err(CliError::Usage(format!(
                "level index {bad} needs more than {} runs",
                self.runs
            )));
        }
        Ok(())
    }

    fn level_indices(&self) -> Vec<usize> {
        match &self.levels {
            Some(l) => l.clone(),
            None => {
                let mut l = vec![0, self.runs / 2, self.runs - 1];
                l.dedup();
                l
            }
        }
    }
}

/// Totals printed after a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub cells: usize,
    pub runs: usize,
    pub evaluations: u64,
    pub stored_records: Option<usize>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn to_tsv(&self) -> String {
        let mut s = format!(
            "cells\t{}\nruns\t{}\nevaluations\t{}\n",
            self.cells, self.runs, self.evaluations
        );
        if let Some(n) = self.stored_records {
            s.push_str(&format!("stored_records\t{n}\n"));
        }
        s
    }
}

/// Loggers and results of a finished run.
pub struct RunOutcome {
    pub summary: RunSummary,
    pub eaf: Option<Arc<Mutex<EafLogger>>>,
    pub store: Option<Arc<Mutex<Store>>>,
}

/// Seed of the solver RNG of one run.
pub fn run_seed(seed: u64, meta: &MetaData, run: usize) -> u64 {
    let mut state = seed
        ^ instance_seed(meta.problem_id(), meta.instance())
        ^ (meta.dimension() as u64).rotate_left(21)
        ^ (run as u64).rotate_left(42);
    splitmix64(&mut state)
}

fn context_properties() -> Vec<Property> {
    [
        Field::Evaluations,
        Field::RawY,
        Field::RawYBest,
        Field::TransformedY,
        Field::TransformedYBest,
    ]
    .into_iter()
    .map(Property::from)
    .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::io(path, source))
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    let mut suite = Suite::new(
        config.suite,
        &config.problems,
        &config.instances,
        &config.dimensions,
    )
    .map_err(|e| CliError::Usage(format!("invalid suite: {e}")))?;
    if let Some(dir) = &config.out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::io(dir, source))?;
    }

    let wants = |f: fn(&LoggerSpec) -> bool| config.loggers.iter().any(f);
    let eaf = (wants(|l| matches!(l, LoggerSpec::Eaf | LoggerSpec::Eah { .. })))
        .then(|| logging::shared(EafLogger::new()));
    let store = if wants(|l| matches!(l, LoggerSpec::Store)) {
        let w = Watcher::new(vec![Box::new(Always)], context_properties())?;
        Some(logging::shared(Store::new(w)))
    } else {
        None
    };
    let flat = match (&config.out, wants(|l| matches!(l, LoggerSpec::FlatFile))) {
        (Some(dir), true) => {
            let w = Watcher::new(vec![Box::new(Always)], context_properties())?;
            Some(logging::shared(FlatFile::new(dir, w)))
        }
        _ => None,
    };
    if let Some(l) = &eaf {
        suite.attach_logger(l);
    }
    if let Some(l) = &store {
        suite.attach_logger(l);
    }
    if let Some(l) = &flat {
        suite.attach_logger(l);
    }

    let cells = suite.len();
    let mut evaluations = 0;
    for mut problem in suite {
        log::info!("{}", problem.meta());
        for r in 0..config.runs {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(config.seed, problem.meta(), r));
            config.solver.solve(&mut problem, config.budget, &mut rng)?;
            evaluations += problem.state().evaluations;
            problem.reset();
        }
    }

    let mut files = Vec::new();
    if let Some(l) = &flat {
        let mut l = l.lock();
        l.flush()?;
        files.extend(l.files());
    }
    if let (Some(dir), Some(eaf)) = (&config.out, &eaf) {
        files.extend(write_attainment(config, dir, &eaf.lock())?);
    }

    Ok(RunOutcome {
        summary: RunSummary {
            cells,
            runs: cells * config.runs,
            evaluations,
            stored_records: store.as_ref().map(|s| s.lock().len()),
            files,
        },
        eaf,
        store,
    })
}

fn write_attainment(
    config: &RunConfig,
    dir: &Path,
    eaf: &EafLogger,
) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    let groups = eaf.groups();
    for (cell, runs) in &groups {
        let stem = cell_file_name(cell);
        let stem = stem.trim_end_matches(".csv");
        let path = dir.join(format!("{stem}_trajectories.csv"));
        let mut w = create(&path)?;
        let keyed = eaf
            .trajectories()
            .iter()
            .filter(|(k, _)| &k.cell == cell)
            .map(|(k, t)| (k.run, t));
        write_trajectories(&mut w, keyed)?;
        w.flush().map_err(|source| CliError::io(&path, source))?;
        files.push(path);

        for spec in &config.loggers {
            if let LoggerSpec::Eah { buckets, scales } = spec {
                let disc = Discretization::fitted(runs, *buckets, *scales)?;
                let path = dir.join(format!("{stem}_eah.csv"));
                let mut w = create(&path)?;
                write_histogram(&mut w, &eah(runs, &disc)?)?;
                w.flush().map_err(|source| CliError::io(&path, source))?;
                files.push(path);
            }
        }
    }

    if config.loggers.contains(&LoggerSpec::Eaf) {
        let mut exports = Vec::with_capacity(groups.len());
        for (cell, runs) in &groups {
            let direction = runs[0].direction();
            let m = runs.len();
            let indices: Vec<usize> = config
                .level_indices()
                .into_iter()
                .filter(|&j| j < m)
                .collect();
            let levels = Levels::new(direction, indices).compute(runs)?;
            let nadir = default_nadir(runs)?;
            exports.push(LevelExport::new(Some(GroupMeta::from(cell)), m, nadir, &levels));
        }
        let path = dir.join("eaf_levels.json");
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, &exports).map_err(anytime::attainment::AttainmentError::from)?;
        writeln!(w).and_then(|_| w.flush()).map_err(|source| CliError::io(&path, source))?;
        files.push(path);
    }
    Ok(files)
}
