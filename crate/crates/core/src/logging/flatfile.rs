use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::problems::MetaData;

use super::{CellKey, LogError, LogInfo, Logger, RunContext, Watcher, FIXED_COLUMNS};

/// File name of the CSV holding `cell`: `<suite>_f<problem>_d<dim>_i<inst>.csv`.
pub fn cell_file_name(cell: &CellKey) -> String {
    format!("{cell}.csv")
}

/// Writes one CSV per cell under a directory.
///
/// Header `run,event,evaluations,<properties...>`, one row per logged event,
/// `\n` line endings, absent values rendered as `NA`. A file is truncated the
/// first time this logger writes to it and appended to afterwards.
pub struct FlatFile {
    dir: PathBuf,
    watcher: Watcher,
    context: RunContext,
    header: String,
    seen: BTreeSet<CellKey>,
    current: Option<(CellKey, PathBuf, BufWriter<File>)>,
}

impl FlatFile {
    pub fn new(dir: impl Into<PathBuf>, watcher: Watcher) -> Self {
        let header = FIXED_COLUMNS
            .iter()
            .copied()
            .chain(watcher.column_names())
            .collect::<Vec<_>>()
            .join(",");
        Self {
            dir: dir.into(),
            watcher,
            context: RunContext::default(),
            header,
            seen: BTreeSet::new(),
            current: None,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Paths of every file written so far.
    pub fn files(&self) -> Vec<PathBuf> {
        self.seen
            .iter()
            .map(|c| self.dir.join(cell_file_name(c)))
            .collect()
    }

    pub fn flush(&mut self) -> Result<(), LogError> {
        if let Some((_, path, w)) = self.current.as_mut() {
            w.flush().map_err(|source| LogError::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(())
    }

    fn writer_for(&mut self, cell: CellKey) -> Result<&mut BufWriter<File>, LogError> {
        if self.current.as_ref().map(|(c, _, _)| c) != Some(&cell) {
            self.flush()?;
            self.current = None;
            let path = self.dir.join(cell_file_name(&cell));
            let io_err = |source| LogError::Io {
                path: path.clone(),
                source,
            };
            let fresh = self.seen.insert(cell.clone());
            let file = if fresh {
                std::fs::create_dir_all(&self.dir).map_err(|source| LogError::Io {
                    path: self.dir.clone(),
                    source,
                })?;
                File::create(&path).map_err(io_err)?
            } else {
                OpenOptions::new().append(true).open(&path).map_err(io_err)?
            };
            let mut w = BufWriter::new(file);
            if fresh {
                writeln!(w, "{}", self.header).map_err(io_err)?;
            }
            self.current = Some((cell, path, w));
        }
        Ok(&mut self.current.as_mut().expect("opened above").2)
    }
}

impl Logger for FlatFile {
    fn attach(&mut self, meta: &MetaData) {
        self.context.attach(meta);
    }

    fn call(&mut self, info: &LogInfo) -> Result<(), LogError> {
        let meta = self.context.meta()?;
        if !self.watcher.fires(info, meta) {
            return Ok(());
        }
        let cell = CellKey::from(meta);
        let values = self.watcher.read(info);
        let run = self.context.run();
        let event = self.context.next_event();

        let mut line = format!("{run},{event},{}", info.evaluations);
        for v in values {
            line.push(',');
            line.push_str(&v.to_string());
        }
        line.push('\n');
        let w = self.writer_for(cell)?;
        let written = w.write_all(line.as_bytes());
        written.map_err(|source| LogError::Io {
            path: self.current.as_ref().expect("writer is open").1.clone(),
            source,
        })
    }

    fn reset(&mut self) {
        self.watcher.reset();
        self.context.reset();
    }
}

impl Drop for FlatFile {
    fn drop(&mut self) {
        if let Err(e) = self.flush() {
            log::error!("flat file flush failed: {e}");
        }
    }
}
