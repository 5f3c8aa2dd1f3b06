use std::borrow::Borrow;

use serde::Serialize;

use crate::problems::Direction;

use super::{canonical, common_direction, AttainmentError, AttainmentPoint, Trajectory};

/// Minimal points of the region attained by at least `level` runs.
///
/// Points are sorted by time; qualities strictly improve along the list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSet {
    pub level: usize,
    pub direction: Direction,
    pub points: Vec<AttainmentPoint>,
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Attainment level sets for each requested level `k` in `1..=m`.
///
/// Sweeps the runs' points in time order while keeping every run's
/// best-so-far quality in a sorted vector; the `k`-th smallest entry is the
/// best quality attained by at least `k` runs so far, and a level point is
/// emitted whenever it strictly improves.
pub fn eaf_levels<T: Borrow<Trajectory>>(
    runs: &[T],
    levels: &[usize],
) -> Result<Vec<LevelSet>, AttainmentError> {
    let direction = common_direction(runs)?;
    let m = runs.len();
    if let Some(&level) = levels.iter().find(|&&k| k == 0 || k > m) {
        return Err(AttainmentError::LevelOutOfRange { level, runs: m });
    }

    let mut events: Vec<(u64, usize, f64)> = runs
        .iter()
        .enumerate()
        .flat_map(|(r, t)| {
            t.borrow()
                .points()
                .iter()
                .map(move |p| (p.time, r, canonical(direction, p.quality)))
        })
        .collect();
    events.sort_by_key(|&(time, run, _)| (time, run));

    let mut best = vec![f64::INFINITY; m];
    let mut sorted = vec![f64::INFINITY; m];
    let mut current = vec![f64::INFINITY; levels.len()];
    let mut out: Vec<Vec<AttainmentPoint>> = vec![Vec::new(); levels.len()];

    let mut i = 0;
    while i < events.len() {
        let time = events[i].0;
        while i < events.len() && events[i].0 == time {
            let (_, run, q) = events[i];
            if q < best[run] {
                let old = sorted.partition_point(|&x| x < best[run]);
                sorted.remove(old);
                let new = sorted.partition_point(|&x| x < q);
                sorted.insert(new, q);
                best[run] = q;
            }
            i += 1;
        }
        for (j, &k) in levels.iter().enumerate() {
            let q = sorted[k - 1];
            if q < current[j] {
                current[j] = q;
                out[j].push(AttainmentPoint::new(time, canonical(direction, q)));
            }
        }
    }

    Ok(levels
        .iter()
        .zip(out)
        .map(|(&level, points)| LevelSet {
            level,
            direction,
            points,
        })
        .collect())
}
