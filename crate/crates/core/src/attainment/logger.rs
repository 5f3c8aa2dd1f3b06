use std::collections::BTreeMap;

use crate::logging::{CellKey, LogError, LogInfo, Logger, RunContext, RunKey};
use crate::problems::{Direction, MetaData};
use crate::triggers::{OnImprovement, Trigger};

use super::{eaf_levels, AttainmentError, AttainmentPoint, LevelSet, Trajectory};

/// Captures one attainment trajectory per run.
///
/// The trigger is fixed to [`OnImprovement`] and the recorded value to the
/// transformed best-so-far, so every stored trajectory is a strict
/// staircase. Trajectories are keyed by suite, problem, dimension, instance
/// and run, leaving any aggregation to the caller.
#[derive(Debug, Default)]
pub struct EafLogger {
    trigger: OnImprovement,
    context: RunContext,
    runs: BTreeMap<RunKey, Trajectory>,
}

impl EafLogger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn trajectories(&self) -> &BTreeMap<RunKey, Trajectory> {
        &self.runs
    }

    /// Runs grouped by an arbitrary key derived from their identity.
    pub fn grouped_by<K: Ord>(&self, key: impl Fn(&RunKey) -> K) -> BTreeMap<K, Vec<&Trajectory>> {
        let mut groups: BTreeMap<K, Vec<&Trajectory>> = BTreeMap::new();
        for (k, t) in &self.runs {
            groups.entry(key(k)).or_default().push(t);
        }
        groups
    }

    /// Runs grouped per (suite, problem, dimension, instance) cell.
    pub fn groups(&self) -> BTreeMap<CellKey, Vec<&Trajectory>> {
        self.grouped_by(|k| k.cell.clone())
    }
}

impl Logger for EafLogger {
    fn attach(&mut self, meta: &MetaData) {
        self.context.attach(meta);
    }

    fn call(&mut self, info: &LogInfo) -> Result<(), LogError> {
        let meta = self.context.meta()?;
        if !self.trigger.fire(info, meta) {
            return Ok(());
        }
        log::trace!("eaf called after improvement");
        let key = RunKey {
            cell: CellKey::from(meta),
            run: self.context.run(),
        };
        let direction = meta.direction();
        self.runs
            .entry(key)
            .or_insert_with(|| Trajectory::empty(direction))
            .improve(AttainmentPoint::new(info.evaluations, info.transformed_y_best));
        Ok(())
    }

    fn reset(&mut self) {
        self.trigger.reset();
        self.context.reset();
    }
}

/// Selects attainment levels by zero-based index: index `j` is level `j + 1`.
#[derive(Clone, Debug)]
pub struct Levels {
    direction: Direction,
    indices: Vec<usize>,
}

impl Levels {
    pub fn new(direction: Direction, indices: impl IntoIterator<Item = usize>) -> Self {
        Self {
            direction,
            indices: indices.into_iter().collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Level sets of one group of runs.
    pub fn compute(&self, runs: &[&Trajectory]) -> Result<Vec<LevelSet>, AttainmentError> {
        if runs.iter().any(|r| r.direction() != self.direction) {
            return Err(AttainmentError::DirectionMismatch);
        }
        let levels: Vec<usize> = self.indices.iter().map(|j| j + 1).collect();
        eaf_levels(runs, &levels)
    }

    /// Level sets of every cell captured by `logger`.
    pub fn select(
        &self,
        logger: &EafLogger,
    ) -> Result<BTreeMap<CellKey, Vec<LevelSet>>, AttainmentError> {
        logger
            .groups()
            .into_iter()
            .map(|(cell, runs)| Ok((cell, self.compute(&runs)?)))
            .collect()
    }
}
