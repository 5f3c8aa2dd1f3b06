//! Brute-force reference implementations used to cross-check the attainment
//! engine. Everything here is deliberately naive: quadratic scans over all
//! grid points, no sweeps, no sorting tricks.
#![allow(dead_code)]

use anytime::attainment::{AttainmentPoint, Discretization, LevelSet, Trajectory};
use anytime::Direction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `m` in [1, 5] runs with up to 8 samples each, integer coordinates <= 20.
pub fn random_instance<R: Rng>(rng: &mut R, direction: Direction) -> Vec<Trajectory> {
    let m = rng.random_range(1..=5);
    (0..m)
        .map(|_| {
            let n = rng.random_range(1..=8);
            let samples: Vec<(u64, f64)> = (0..n)
                .map(|_| (rng.random_range(1..=20), rng.random_range(0..=20) as f64))
                .collect();
            Trajectory::from_samples(direction, samples).unwrap()
        })
        .collect()
}

pub fn dominates(a: &AttainmentPoint, b: &AttainmentPoint, direction: Direction) -> bool {
    let q = match direction {
        Direction::Minimization => a.quality <= b.quality,
        Direction::Maximization => a.quality >= b.quality,
    };
    a.time <= b.time && q
}

pub fn run_attains(run: &Trajectory, y: &AttainmentPoint) -> bool {
    run.points().iter().any(|p| dominates(p, y, run.direction()))
}

pub fn count(runs: &[Trajectory], y: &AttainmentPoint) -> usize {
    runs.iter().filter(|r| run_attains(r, y)).count()
}

/// Level `k` as the minimal elements of the grid points attained by at
/// least `k` runs, the grid being every observed time x every observed
/// quality.
pub fn level(runs: &[Trajectory], k: usize) -> Vec<AttainmentPoint> {
    let direction = runs[0].direction();
    let all: Vec<AttainmentPoint> = runs.iter().flat_map(|r| r.points().to_vec()).collect();
    let mut attained = Vec::new();
    for a in &all {
        for b in &all {
            let y = AttainmentPoint::new(a.time, b.quality);
            if count(runs, &y) >= k && !attained.contains(&y) {
                attained.push(y);
            }
        }
    }
    let mut minimal: Vec<AttainmentPoint> = attained
        .iter()
        .filter(|y| !attained.iter().any(|z| z != *y && dominates(z, y, direction)))
        .copied()
        .collect();
    minimal.sort_by_key(|p| p.time);
    minimal
}

/// Area dominated by `set` inside the box whose worst corner is `nadir`,
/// estimated with one jittered sample per cell of an `n x n` stratification.
pub fn monte_carlo_area<R: Rng>(
    set: &LevelSet,
    nadir: &AttainmentPoint,
    n: usize,
    rng: &mut R,
) -> f64 {
    let direction = set.direction;
    let t0 = set.points.iter().map(|p| p.time).min().unwrap() as f64;
    let t1 = nadir.time as f64;
    let qs = set.points.iter().map(|p| p.quality);
    let (q0, q1) = match direction {
        Direction::Minimization => (qs.fold(f64::INFINITY, f64::min), nadir.quality),
        Direction::Maximization => (nadir.quality, qs.fold(f64::NEG_INFINITY, f64::max)),
    };
    let (wt, wq) = ((t1 - t0) / n as f64, (q1 - q0) / n as f64);
    let mut hits = 0usize;
    for i in 0..n {
        for j in 0..n {
            let t = t0 + (i as f64 + rng.random::<f64>()) * wt;
            let q = q0 + (j as f64 + rng.random::<f64>()) * wq;
            let covered = set.points.iter().any(|p| {
                (p.time as f64) <= t
                    && match direction {
                        Direction::Minimization => p.quality <= q,
                        Direction::Maximization => p.quality >= q,
                    }
            });
            hits += covered as usize;
        }
    }
    (t1 - t0) * (q1 - q0) * hits as f64 / (n * n) as f64
}

/// Histogram cell count: the runs attaining the cell's reference point.
/// Point coordinates are first clamped into the axis ranges.
pub fn cell_count(runs: &[Trajectory], disc: &Discretization, bt: usize, bq: usize) -> usize {
    let rt = disc.time.representative(bt);
    let rq = disc.quality.representative(bq);
    let clamp = |y: f64, lo: f64, ext: f64| y.max(lo).min(lo + ext);
    runs.iter()
        .filter(|r| {
            r.points().iter().any(|p| {
                let t = clamp(p.time as f64, disc.time.origin(), disc.time.extent());
                let q = clamp(p.quality, disc.quality.origin(), disc.quality.extent());
                t <= rt
                    && match r.direction() {
                        Direction::Minimization => q <= rq,
                        Direction::Maximization => q >= rq,
                    }
            })
        })
        .count()
}

/// Outcome of logging one experiment through both a flat file and a store.
pub struct RoundTrip {
    pub cursors: usize,
    pub mismatches: Vec<String>,
    pub absent_cells: usize,
}

/// Runs two cells with a watcher on (evaluations, transformed_y_best, an
/// external pointer) feeding a `FlatFile` and a `Store`, dropping the
/// external variable mid-way through the second cell. Every parsed file
/// cell is then compared with the store at the same cursor.
pub fn flat_file_round_trip(dir: &std::path::Path) -> RoundTrip {
    use anytime::logging::{self, cell_file_name, Combine, Cursor, FlatFile, LoggedValue, Store, Watcher};
    use anytime::properties::{Field, Property, Variable};
    use anytime::triggers::{Any, At, OnImprovement};
    use anytime::{Problem, SuiteKind};

    let variable = Variable::new(0.5);
    let properties = vec![
        Property::from(Field::Evaluations),
        Property::from(Field::TransformedYBest),
        Property::pointer("step", Some(&variable)),
    ];
    let triggers = || -> Vec<Box<dyn anytime::triggers::Trigger>> {
        vec![Box::new(Any::new(vec![Box::new(OnImprovement::new()), Box::new(At::new([3, 7]))]))]
    };
    let store = logging::shared(Store::new(Watcher::new(triggers(), properties.clone()).unwrap()));
    let flat = logging::shared(FlatFile::new(dir, Watcher::new(triggers(), properties).unwrap()));
    let both = logging::shared(Combine::new(vec![]).with(&store).with(&flat));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut variable = Some(variable);
    for (cell, instance) in [1u32, 2].into_iter().enumerate() {
        let mut p = Problem::new(SuiteKind::Continuous, 2, instance, 3).unwrap();
        p.attach_logger(&both);
        for run in 0..3 {
            for e in 0..12 {
                if cell == 1 && run == 1 && e == 5 {
                    variable = None;
                }
                if let Some(v) = &variable {
                    v.set(e as f64 / 2.0);
                }
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
                p.evaluate(&x).unwrap();
            }
            p.reset();
        }
    }
    flat.lock().flush().unwrap();

    let store = store.lock();
    let columns: Vec<String> = store.columns().to_vec();
    let mut out = RoundTrip { cursors: 0, mismatches: Vec::new(), absent_cells: 0 };
    let cells: Vec<_> = store.cells().cloned().collect();
    for cell in cells {
        let path = dir.join(cell_file_name(&cell));
        let mut reader = ::csv::Reader::from_path(&path).unwrap();
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let mut expected_header = vec!["run".to_string(), "event".into(), "evaluations".into()];
        expected_header.extend(columns.iter().cloned());
        if header != expected_header {
            out.mismatches.push(format!("{}: header {header:?}", path.display()));
        }
        let mut rows = 0;
        for row in reader.records() {
            let row = row.unwrap();
            rows += 1;
            let run: usize = row[0].parse().unwrap();
            let event: usize = row[1].parse().unwrap();
            let cursor = Cursor::new(cell.suite_name.clone(), cell.problem_id, cell.dimension, cell.instance, run, event);
            out.cursors += 1;
            for (i, name) in header.iter().enumerate().skip(2) {
                let parsed = LoggedValue::parse(&row[i]).unwrap();
                if !parsed.is_present() {
                    out.absent_cells += 1;
                }
                let stored = store.at(&cursor, name);
                if parsed != stored {
                    out.mismatches.push(format!("{cursor:?} {name}: file {parsed} store {stored}"));
                }
            }
        }
        let stored_rows: usize = store.runs(&cell).map(|(_, r)| r.len()).sum();
        if rows != stored_rows {
            out.mismatches.push(format!("{cell}: {rows} file rows, {stored_rows} stored"));
        }
    }
    out
}
