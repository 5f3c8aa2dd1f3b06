use std::collections::BTreeMap;

use crate::problems::MetaData;

use super::{CellKey, Cursor, LogError, LogInfo, LoggedValue, Logger, RunContext, Watcher};

/// One logged event.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub evaluations: u64,
    /// One value per watched property column.
    pub values: Vec<LoggedValue>,
}

/// In-memory logger addressable by [`Cursor`].
#[derive(Debug)]
pub struct Store {
    watcher: Watcher,
    context: RunContext,
    columns: Vec<String>,
    data: BTreeMap<CellKey, BTreeMap<usize, Vec<Record>>>,
}

impl Store {
    pub fn new(watcher: Watcher) -> Self {
        let columns = watcher.column_names().into_iter().map(String::from).collect();
        Self {
            watcher,
            context: RunContext::default(),
            columns,
            data: BTreeMap::new(),
        }
    }

    /// Property column names, in record order.
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Value of `property` at `cursor`; absent when nothing is recorded there.
    ///
    /// `"evaluations"` addresses the fixed evaluation column.
    pub fn at(&self, cursor: &Cursor, property: &str) -> LoggedValue {
        let Some(record) = self.record(cursor) else {
            return LoggedValue::ABSENT;
        };
        if property == "evaluations" {
            return LoggedValue::present(record.evaluations as f64);
        }
        match self.columns.iter().position(|c| c == property) {
            Some(i) => record.values[i],
            None => LoggedValue::ABSENT,
        }
    }

    pub fn record(&self, cursor: &Cursor) -> Option<&Record> {
        self.data
            .get(&cursor.cell())?
            .get(&cursor.run)?
            .get(cursor.event_index)
    }

    pub fn cells(&self) -> impl Iterator<Item = &CellKey> {
        self.data.keys()
    }

    /// Runs of `cell` that logged at least one event, with their records.
    pub fn runs(&self, cell: &CellKey) -> impl Iterator<Item = (usize, &[Record])> {
        self.data
            .get(cell)
            .into_iter()
            .flat_map(|runs| runs.iter().map(|(&r, recs)| (r, recs.as_slice())))
    }

    /// Total number of records over all cells and runs.
    pub fn len(&self) -> usize {
        self.data
            .values()
            .flat_map(|runs| runs.values())
            .map(Vec::len)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Logger for Store {
    fn attach(&mut self, meta: &MetaData) {
        self.context.attach(meta);
    }

    fn call(&mut self, info: &LogInfo) -> Result<(), LogError> {
        let meta = match self.context.meta() {
            Ok(m) => m,
            Err(e) => {
                log::warn!("store called before attach");
                return Err(e);
            }
        };
        if !self.watcher.fires(info, meta) {
            return Ok(());
        }
        let cell = CellKey::from(meta);
        let record = Record {
            evaluations: info.evaluations,
            values: self.watcher.read(info),
        };
        self.data
            .entry(cell)
            .or_default()
            .entry(self.context.run())
            .or_default()
            .push(record);
        Ok(())
    }

    fn reset(&mut self) {
        self.watcher.reset();
        self.context.reset();
    }
}
