use std::borrow::Borrow;

use serde::Serialize;

use crate::problems::Direction;

use super::{common_direction, AttainmentError, Discretization, Trajectory};

/// Attainment counts on a (time bucket × quality bucket) grid.
///
/// The count of a cell is the number of runs attaining the cell's reference
/// point, whose coordinates are the representatives of its buckets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    discretization: Discretization,
    direction: Direction,
    runs: usize,
    /// Row-major over time buckets.
    counts: Vec<usize>,
}

impl Histogram {
    pub fn discretization(&self) -> &Discretization {
        &self.discretization
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn time_buckets(&self) -> usize {
        self.discretization.time.buckets()
    }

    pub fn quality_buckets(&self) -> usize {
        self.discretization.quality.buckets()
    }

    pub fn count(&self, time_bucket: usize, quality_bucket: usize) -> usize {
        self.counts[time_bucket * self.quality_buckets() + quality_bucket]
    }

    /// Discretized attainment function value of a cell.
    pub fn fraction(&self, time_bucket: usize, quality_bucket: usize) -> f64 {
        self.count(time_bucket, quality_bucket) as f64 / self.runs as f64
    }

    /// `(time_bucket, quality_bucket, count)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let nq = self.quality_buckets();
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i / nq, i % nq, c))
    }
}

/// Empirical attainment histogram of `runs` on `disc`.
///
/// Point coordinates are clamped into the axes' ranges (or rejected on an
/// axis with clamping disabled). For each run and time bucket, the run's
/// best quality up to the bucket's reference time decides which quality
/// buckets it attains; those form a contiguous range since reference
/// qualities increase with the bucket index.
pub fn eah<T: Borrow<Trajectory>>(
    runs: &[T],
    disc: &Discretization,
) -> Result<Histogram, AttainmentError> {
    let direction = common_direction(runs)?;
    let (nt, nq) = (disc.time.buckets(), disc.quality.buckets());
    let ref_t: Vec<f64> = (0..nt).map(|i| disc.time.representative(i)).collect();
    let ref_q: Vec<f64> = (0..nq).map(|i| disc.quality.representative(i)).collect();
    let mut counts = vec![0usize; nt * nq];

    for run in runs {
        let points = run
            .borrow()
            .points()
            .iter()
            .map(|p| {
                Ok((
                    disc.time.check("time", p.time as f64)?,
                    disc.quality.check("quality", p.quality)?,
                ))
            })
            .collect::<Result<Vec<_>, AttainmentError>>()?;

        let mut next = 0;
        let mut best: Option<f64> = None;
        for (bt, &t) in ref_t.iter().enumerate() {
            while next < points.len() && points[next].0 <= t {
                let q = points[next].1;
                if best.is_none_or(|b| direction.is_at_least(q, b)) {
                    best = Some(q);
                }
                next += 1;
            }
            let Some(b) = best else { continue };
            let row = &mut counts[bt * nq..(bt + 1) * nq];
            let attained = match direction {
                Direction::Minimization => ref_q.partition_point(|&r| r < b)..nq,
                Direction::Maximization => 0..ref_q.partition_point(|&r| r <= b),
            };
            for c in &mut row[attained] {
                *c += 1;
            }
        }
    }

    Ok(Histogram {
        discretization: *disc,
        direction,
        runs: runs.len(),
        counts,
    })
}
