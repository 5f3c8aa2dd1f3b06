use std::borrow::Borrow;

use super::{canonical, common_direction, AttainmentError, AttainmentPoint, LevelSet, Trajectory};

/// Componentwise worst point over all runs: the latest time and the worst
/// quality observed.
pub fn default_nadir<T: Borrow<Trajectory>>(runs: &[T]) -> Result<AttainmentPoint, AttainmentError> {
    let direction = common_direction(runs)?;
    let mut points = runs.iter().flat_map(|r| r.borrow().points().iter().copied());
    let first = points.next().ok_or(AttainmentError::NoPoints)?;
    Ok(points.fold(first, |acc, p| AttainmentPoint {
        time: acc.time.max(p.time),
        quality: if direction.is_better(acc.quality, p.quality) {
            p.quality
        } else {
            acc.quality
        },
    }))
}

/// Area weakly dominated by `level` inside the box closed by `nadir`.
///
/// With points sorted by time, the area is the sum of
/// `gain(q_i) * (t_{i+1} - t_i)` where the gain is the quality distance to
/// the nadir and the last width ends at the nadir time.
pub fn surface(level: &LevelSet, nadir: &AttainmentPoint) -> Result<f64, AttainmentError> {
    let direction = level.direction;
    let nadir_q = canonical(direction, nadir.quality);
    if let Some(bad) = level
        .points
        .iter()
        .find(|p| p.time > nadir.time || canonical(direction, p.quality) > nadir_q)
    {
        return Err(AttainmentError::NadirNotDominated {
            time: bad.time,
            quality: bad.quality,
            nadir_time: nadir.time,
            nadir_quality: nadir.quality,
        });
    }
    let ends = level
        .points
        .iter()
        .skip(1)
        .map(|p| p.time)
        .chain(std::iter::once(nadir.time));
    Ok(level
        .points
        .iter()
        .zip(ends)
        .map(|(p, end)| (nadir_q - canonical(direction, p.quality)) * (end - p.time) as f64)
        .sum())
}

/// Sum of the surfaces of `levels`.
///
/// When `normalized`, the sum is divided by the number of levels times the
/// area of the box spanned by the nadir and the componentwise best point of
/// the levels, giving a value in `[0, 1]` (0 when that box is degenerate).
pub fn volume(
    levels: &[LevelSet],
    nadir: &AttainmentPoint,
    normalized: bool,
) -> Result<f64, AttainmentError> {
    let mut total = 0.0;
    for l in levels {
        total += surface(l, nadir)?;
    }
    if !normalized {
        return Ok(total);
    }
    let mut ideal: Option<(u64, f64)> = None;
    for l in levels {
        for p in &l.points {
            let q = canonical(l.direction, p.quality);
            ideal = Some(match ideal {
                None => (p.time, q),
                Some((t, best)) => (t.min(p.time), best.min(q)),
            });
        }
    }
    let Some((ideal_t, ideal_q)) = ideal else {
        return Ok(0.0);
    };
    let direction = levels[0].direction;
    let area = (nadir.time - ideal_t) as f64 * (canonical(direction, nadir.quality) - ideal_q);
    if area <= 0.0 {
        return Ok(0.0);
    }
    Ok(total / (levels.len() as f64 * area))
}
