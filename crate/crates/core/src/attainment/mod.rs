//! Empirical attainment of quality/time trajectories.
//!
//! A run of an anytime optimizer is summarised by its attainment trajectory:
//! the (evaluations, best-so-far quality) pairs at which the best-so-far
//! strictly improved. Given `m` such trajectories, the empirical attainment
//! function (EAF) at a point `y` is the fraction of runs which weakly
//! dominate `y`. This module computes
//!
//! * the attainment level sets of the EAF ([`eaf_levels`]);
//! * its discretized counterpart, the empirical attainment histogram
//!   ([`eah`]), on linear or logarithmic grids;
//! * surface and volume statistics over level sets ([`surface`],
//!   [`volume`]).
//!
//! Time is never flipped: a later attainment is always weaker. Quality obeys
//! the problem's [`Direction`].

mod discretize;
mod histogram;
pub mod io;
mod levels;
mod logger;
mod stats;

use std::borrow::Borrow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problems::Direction;

pub use discretize::{Axis, Discretization, Scale};
pub use histogram::{eah, Histogram};
pub use levels::{eaf_levels, LevelSet};
pub use logger::{EafLogger, Levels};
pub use stats::{default_nadir, surface, volume};

#[derive(Debug, Error)]
pub enum AttainmentError {
    #[error("no trajectories given")]
    NoRuns,
    #[error("no samples given")]
    NoSamples,
    #[error("trajectories contain no points")]
    NoPoints,
    #[error("level {level} is outside [1, {runs}]")]
    LevelOutOfRange { level: usize, runs: usize },
    #[error("trajectories mix optimization directions")]
    DirectionMismatch,
    #[error("point {index} ({time}, {quality}) breaks the strict staircase")]
    NotStaircase {
        index: usize,
        time: u64,
        quality: f64,
    },
    #[error("invalid point ({time}, {quality}): time must be >= 1 and quality finite")]
    InvalidPoint { time: u64, quality: f64 },
    #[error("nadir ({nadir_time}, {nadir_quality}) is not dominated by ({time}, {quality})")]
    NadirNotDominated {
        time: u64,
        quality: f64,
        nadir_time: u64,
        nadir_quality: f64,
    },
    #[error("{axis} value {value} lies outside [{lower}, {upper}]")]
    OutOfRange {
        axis: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid discretization: {0}")]
    InvalidAxis(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A (time, quality) pair; time counts evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttainmentPoint {
    pub time: u64,
    pub quality: f64,
}

impl AttainmentPoint {
    pub fn new(time: u64, quality: f64) -> Self {
        Self { time, quality }
    }

    fn validate(self) -> Result<Self, AttainmentError> {
        if self.time == 0 || !self.quality.is_finite() {
            return Err(AttainmentError::InvalidPoint {
                time: self.time,
                quality: self.quality,
            });
        }
        Ok(self)
    }
}

impl From<(u64, f64)> for AttainmentPoint {
    fn from((time, quality): (u64, f64)) -> Self {
        Self { time, quality }
    }
}

/// `a` is no later than `b` and at least as good.
pub fn weakly_dominates(a: &AttainmentPoint, b: &AttainmentPoint, direction: Direction) -> bool {
    a.time <= b.time && direction.is_at_least(a.quality, b.quality)
}

/// Maps a quality onto the minimisation orientation used internally.
pub(crate) fn canonical(direction: Direction, quality: f64) -> f64 {
    match direction {
        Direction::Minimization => quality,
        Direction::Maximization => -quality,
    }
}

/// Best-so-far staircase of one run: times strictly increase and qualities
/// strictly improve along the list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    direction: Direction,
    points: Vec<AttainmentPoint>,
}

impl Trajectory {
    pub fn empty(direction: Direction) -> Self {
        Self {
            direction,
            points: Vec::new(),
        }
    }

    /// Builds a trajectory from points that already form a strict staircase.
    pub fn new(direction: Direction, points: Vec<AttainmentPoint>) -> Result<Self, AttainmentError> {
        let mut t = Self::empty(direction);
        for (index, p) in points.into_iter().enumerate() {
            let p = p.validate()?;
            if !t.extends(&p) {
                return Err(AttainmentError::NotStaircase {
                    index,
                    time: p.time,
                    quality: p.quality,
                });
            }
            t.points.push(p);
        }
        Ok(t)
    }

    /// Keeps only the strict improvements of an arbitrary sample sequence.
    ///
    /// Samples are ordered by time first; among samples sharing a time the
    /// best one is kept.
    pub fn from_samples(
        direction: Direction,
        samples: impl IntoIterator<Item = (u64, f64)>,
    ) -> Result<Self, AttainmentError> {
        let mut samples: Vec<AttainmentPoint> = samples
            .into_iter()
            .map(|s| AttainmentPoint::from(s).validate())
            .collect::<Result<_, _>>()?;
        samples.sort_by_key(|p| p.time);
        let mut t = Self::empty(direction);
        for p in samples {
            t.improve(p);
        }
        Ok(t)
    }

    fn extends(&self, p: &AttainmentPoint) -> bool {
        self.points.last().is_none_or(|last| {
            p.time > last.time && self.direction.is_better(p.quality, last.quality)
        })
    }

    /// Appends `p` if it is a strict improvement; a better point at the same
    /// time as the last one replaces it. Returns whether the staircase grew
    /// or changed.
    pub fn improve(&mut self, p: AttainmentPoint) -> bool {
        match self.points.last_mut() {
            Some(last) if !self.direction.is_better(p.quality, last.quality) => false,
            Some(last) if p.time <= last.time => {
                last.quality = p.quality;
                true
            }
            _ => {
                self.points.push(p);
                true
            }
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn points(&self) -> &[AttainmentPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `true` iff some point of the trajectory weakly dominates `y`.
    pub fn attains(&self, y: &AttainmentPoint) -> bool {
        // The best point no later than y.time is the last one before it.
        let n = self.points.partition_point(|p| p.time <= y.time);
        n > 0 && self.direction.is_at_least(self.points[n - 1].quality, y.quality)
    }
}

/// Shared direction of a non-empty set of runs.
pub(crate) fn common_direction<T: Borrow<Trajectory>>(runs: &[T]) -> Result<Direction, AttainmentError> {
    let first = runs.first().ok_or(AttainmentError::NoRuns)?.borrow().direction;
    if runs.iter().any(|r| r.borrow().direction != first) {
        return Err(AttainmentError::DirectionMismatch);
    }
    Ok(first)
}

/// Scalar empirical CDF: the fraction of samples `<= x`.
pub fn ecdf(samples: &[f64], x: f64) -> Result<f64, AttainmentError> {
    if samples.is_empty() {
        return Err(AttainmentError::NoSamples);
    }
    let hits = samples.iter().filter(|&&s| s <= x).count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Number of runs attaining `y`.
pub fn attainment_count<T: Borrow<Trajectory>>(runs: &[T], y: &AttainmentPoint) -> usize {
    runs.iter().filter(|r| (*r).borrow().attains(y)).count()
}

/// The empirical attainment function at `y`.
pub fn eaf<T: Borrow<Trajectory>>(runs: &[T], y: &AttainmentPoint) -> Result<f64, AttainmentError> {
    common_direction(runs)?;
    Ok(attainment_count(runs, y) as f64 / runs.len() as f64)
}
