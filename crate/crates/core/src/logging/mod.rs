//! Logger contract and composite loggers.
//!
//! A [`Logger`] is notified by a problem of three events: `attach` when it
//! starts observing a (problem, dimension, instance) cell, `call` after every
//! evaluation and `reset` at every run boundary. Which calls are recorded is
//! decided by [triggers](crate::triggers); what is recorded by
//! [properties](crate::properties). A [`Watcher`] bundles both and is the
//! building block of [`Store`] and [`FlatFile`].

mod flatfile;
mod store;

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use parking_lot::Mutex;
use thiserror::Error;

use crate::problems::MetaData;
use crate::properties::{Field, Property};
use crate::triggers::Trigger;

pub use flatfile::{cell_file_name, FlatFile};
pub use store::{Record, Store};

/// Token rendered in files for an absent value.
pub const ABSENT_TOKEN: &str = "NA";

/// Column names that precede the watched properties in every record.
pub const FIXED_COLUMNS: [&str; 3] = ["run", "event", "evaluations"];

#[derive(Debug, Error)]
pub enum LogError {
    #[error("logger called before being attached to a problem")]
    NotAttached,
    #[error("two properties are named `{0}`")]
    DuplicateProperty(String),
    #[error("property name `{0}` is reserved")]
    ReservedName(String),
    #[error("property name must not be empty")]
    EmptyName,
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Snapshot of a problem right after an evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogInfo {
    /// One-based count of evaluations in the current run.
    pub evaluations: u64,
    pub raw_y: f64,
    pub raw_y_best: f64,
    pub transformed_y: f64,
    pub transformed_y_best: f64,
    pub solution: Vec<f64>,
}

pub trait Logger {
    /// Starts observing the cell described by `meta`.
    fn attach(&mut self, meta: &MetaData);

    /// Handles one evaluation.
    fn call(&mut self, info: &LogInfo) -> Result<(), LogError>;

    /// Run boundary: per-run state is cleared and the run index advances.
    fn reset(&mut self);
}

/// Handle under which loggers are shared between a problem and its owner.
pub type SharedLogger = Arc<Mutex<dyn Logger + Send>>;

/// Wraps a logger into a [`SharedLogger`].
pub fn shared<L: Logger + Send + 'static>(logger: L) -> Arc<Mutex<L>> {
    Arc::new(Mutex::new(logger))
}

/// A scalar that may be absent in the current context.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LoggedValue(Option<f64>);

impl LoggedValue {
    pub const ABSENT: LoggedValue = LoggedValue(None);

    pub fn present(value: f64) -> Self {
        LoggedValue(Some(value))
    }

    pub fn is_present(&self) -> bool {
        self.0.is_some()
    }

    pub fn value(&self) -> Option<f64> {
        self.0
    }

    /// Parses a rendered cell back, `NA` meaning absent.
    pub fn parse(cell: &str) -> Option<Self> {
        if cell == ABSENT_TOKEN {
            Some(Self::ABSENT)
        } else {
            cell.parse().ok().map(Self::present)
        }
    }
}

impl From<Option<f64>> for LoggedValue {
    fn from(v: Option<f64>) -> Self {
        LoggedValue(v)
    }
}

impl From<f64> for LoggedValue {
    fn from(v: f64) -> Self {
        LoggedValue(Some(v))
    }
}

/// Shortest round-trip rendering, `NA` when absent.
impl fmt::Display for LoggedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => f.write_str(ABSENT_TOKEN),
        }
    }
}

/// Identity of a (suite, problem, dimension, instance) cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub suite_name: String,
    pub problem_id: u32,
    pub dimension: usize,
    pub instance: u32,
}

impl From<&MetaData> for CellKey {
    fn from(meta: &MetaData) -> Self {
        Self {
            suite_name: meta.suite_name().to_owned(),
            problem_id: meta.problem_id(),
            dimension: meta.dimension(),
            instance: meta.instance(),
        }
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_f{}_d{}_i{}",
            self.suite_name, self.problem_id, self.dimension, self.instance
        )
    }
}

/// Identity of a single run inside a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunKey {
    pub cell: CellKey,
    pub run: usize,
}

/// Address of one logged event.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cursor {
    pub suite_name: String,
    pub problem_id: u32,
    pub dimension: usize,
    pub instance: u32,
    pub run: usize,
    /// Zero-based over the logged events of the run, not over evaluations.
    pub event_index: usize,
}

impl Cursor {
    pub fn new(
        suite_name: impl Into<String>,
        problem_id: u32,
        dimension: usize,
        instance: u32,
        run: usize,
        event_index: usize,
    ) -> Self {
        Self {
            suite_name: suite_name.into(),
            problem_id,
            dimension,
            instance,
            run,
            event_index,
        }
    }

    pub fn cell(&self) -> CellKey {
        CellKey {
            suite_name: self.suite_name.clone(),
            problem_id: self.problem_id,
            dimension: self.dimension,
            instance: self.instance,
        }
    }
}

/// Attached metadata and run counter shared by the concrete loggers.
///
/// The run index restarts at 0 whenever a different cell is attached and
/// advances on every reset.
#[derive(Clone, Debug, Default)]
pub struct RunContext {
    meta: Option<MetaData>,
    run: usize,
    events: usize,
}

impl RunContext {
    pub fn attach(&mut self, meta: &MetaData) {
        if self.meta.as_ref() != Some(meta) {
            self.meta = Some(meta.clone());
            self.run = 0;
            self.events = 0;
        }
    }

    pub fn reset(&mut self) {
        self.run += 1;
        self.events = 0;
    }

    pub fn meta(&self) -> Result<&MetaData, LogError> {
        self.meta.as_ref().ok_or(LogError::NotAttached)
    }

    pub fn run(&self) -> usize {
        self.run
    }

    /// Returns the index of the next event and advances the counter.
    pub fn next_event(&mut self) -> usize {
        self.events += 1;
        self.events - 1
    }
}

/// A trigger set plus the properties recorded when any trigger fires.
pub struct Watcher {
    triggers: Vec<Box<dyn Trigger>>,
    properties: Vec<Property>,
}

impl fmt::Debug for Watcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Watcher")
            .field("triggers", &self.triggers.len())
            .field("properties", &self.column_names())
            .finish()
    }
}

impl Watcher {
    /// The evaluation counter always has its own fixed column, so a watched
    /// [`Field::Evaluations`] is folded into it.
    pub fn new(
        triggers: Vec<Box<dyn Trigger>>,
        properties: Vec<Property>,
    ) -> Result<Self, LogError> {
        let mut kept: Vec<Property> = Vec::with_capacity(properties.len());
        for p in properties {
            if matches!(p, Property::Context(Field::Evaluations)) {
                continue;
            }
            let name = p.name();
            if name.is_empty() {
                return Err(LogError::EmptyName);
            }
            if FIXED_COLUMNS.contains(&name) {
                return Err(LogError::ReservedName(name.to_owned()));
            }
            if kept.iter().any(|k| k.name() == name) {
                return Err(LogError::DuplicateProperty(name.to_owned()));
            }
            kept.push(p);
        }
        Ok(Self {
            triggers,
            properties: kept,
        })
    }

    /// Any-semantics over the trigger list; every trigger is evaluated.
    pub fn fires(&mut self, info: &LogInfo, meta: &MetaData) -> bool {
        let mut fired = false;
        for t in &mut self.triggers {
            fired |= t.fire(info, meta);
        }
        fired
    }

    pub fn read(&self, info: &LogInfo) -> Vec<LoggedValue> {
        self.properties.iter().map(|p| p.read(info)).collect()
    }

    /// Names of the property columns, after [`FIXED_COLUMNS`].
    pub fn column_names(&self) -> Vec<&str> {
        self.properties.iter().map(Property::name).collect()
    }

    pub fn reset(&mut self) {
        for t in &mut self.triggers {
            t.reset();
        }
    }
}

/// Forwards every notification to each child, in order.
#[derive(Default)]
pub struct Combine {
    children: Vec<SharedLogger>,
}

impl Combine {
    pub fn new(children: Vec<SharedLogger>) -> Self {
        Self { children }
    }

    pub fn with<L: Logger + Send + 'static>(mut self, logger: &Arc<Mutex<L>>) -> Self {
        self.children.push(logger.clone());
        self
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }
}

impl Logger for Combine {
    fn attach(&mut self, meta: &MetaData) {
        for c in &self.children {
            c.lock().attach(meta);
        }
    }

    fn call(&mut self, info: &LogInfo) -> Result<(), LogError> {
        let mut result = Ok(());
        for c in &self.children {
            let r = c.lock().call(info);
            if result.is_ok() {
                result = r;
            }
        }
        result
    }

    fn reset(&mut self) {
        for c in &self.children {
            c.lock().reset();
        }
    }
}
