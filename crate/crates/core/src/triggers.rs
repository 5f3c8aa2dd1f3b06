//! Predicates deciding whether an evaluation is logged.
//!
//! Evaluation indices are one-based: the first call of a run has
//! `evaluations == 1`.

use std::ops::RangeInclusive;

use crate::logging::LogInfo;
use crate::problems::MetaData;

pub trait Trigger: Send {
    fn fire(&mut self, info: &LogInfo, meta: &MetaData) -> bool;

    /// Restores the freshly constructed state.
    fn reset(&mut self) {}
}

/// Fires on every call.
#[derive(Clone, Copy, Debug, Default)]
pub struct Always;

impl Trigger for Always {
    fn fire(&mut self, _: &LogInfo, _: &MetaData) -> bool {
        true
    }
}

/// Fires when `transformed_y` is strictly better than every value it fired on
/// since construction or the last reset.
#[derive(Clone, Copy, Debug, Default)]
pub struct OnImprovement {
    best: Option<f64>,
}

impl OnImprovement {
    pub fn new() -> Self {
        Self::default()
    }

    /// Best value seen, `None` while still at the direction's worst.
    pub fn best(&self) -> Option<f64> {
        self.best
    }
}

impl Trigger for OnImprovement {
    fn fire(&mut self, info: &LogInfo, meta: &MetaData) -> bool {
        let direction = meta.direction();
        let best = self.best.unwrap_or_else(|| direction.worst());
        if direction.is_better(info.transformed_y, best) {
            self.best = Some(info.transformed_y);
            true
        } else {
            false
        }
    }

    fn reset(&mut self) {
        self.best = None;
    }
}

/// Fires at the listed evaluation indices.
#[derive(Clone, Debug, Default)]
pub struct At {
    indices: Vec<u64>,
}

impl At {
    pub fn new(indices: impl IntoIterator<Item = u64>) -> Self {
        let mut indices: Vec<u64> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }
}

impl Trigger for At {
    fn fire(&mut self, info: &LogInfo, _: &MetaData) -> bool {
        self.indices.binary_search(&info.evaluations).is_ok()
    }
}

/// Fires every `interval` evaluations, counting from `start`.
#[derive(Clone, Copy, Debug)]
pub struct Each {
    interval: u64,
    start: u64,
}

impl Each {
    /// # Panics
    /// If `interval` is zero.
    pub fn new(interval: u64) -> Self {
        Self::starting_at(interval, 0)
    }

    pub fn starting_at(interval: u64, start: u64) -> Self {
        assert!(interval > 0, "Each interval must be positive");
        Self { interval, start }
    }
}

impl Trigger for Each {
    fn fire(&mut self, info: &LogInfo, _: &MetaData) -> bool {
        info.evaluations >= self.start && (info.evaluations - self.start).is_multiple_of(self.interval)
    }
}

/// Fires while the evaluation index lies in any of the closed ranges.
#[derive(Clone, Debug, Default)]
pub struct During {
    ranges: Vec<RangeInclusive<u64>>,
}

impl During {
    pub fn new(ranges: impl IntoIterator<Item = RangeInclusive<u64>>) -> Self {
        Self {
            ranges: ranges.into_iter().collect(),
        }
    }
}

impl Trigger for During {
    fn fire(&mut self, info: &LogInfo, _: &MetaData) -> bool {
        self.ranges.iter().any(|r| r.contains(&info.evaluations))
    }
}

/// Logical OR of its children. Every child is evaluated on every call, so
/// stateful children stay in step. `Any` of nothing never fires.
#[derive(Default)]
pub struct Any {
    children: Vec<Box<dyn Trigger>>,
}

impl Any {
    pub fn new(children: Vec<Box<dyn Trigger>>) -> Self {
        Self { children }
    }
}

impl Trigger for Any {
    fn fire(&mut self, info: &LogInfo, meta: &MetaData) -> bool {
        self.children
            .iter_mut()
            .fold(false, |acc, t| t.fire(info, meta) | acc)
    }

    fn reset(&mut self) {
        self.children.iter_mut().for_each(|t| t.reset());
    }
}

/// Logical AND of its children, no short-circuit. `All` of nothing always
/// fires.
#[derive(Default)]
pub struct All {
    children: Vec<Box<dyn Trigger>>,
}

impl All {
    pub fn new(children: Vec<Box<dyn Trigger>>) -> Self {
        Self { children }
    }
}

impl Trigger for All {
    fn fire(&mut self, info: &LogInfo, meta: &MetaData) -> bool {
        self.children
            .iter_mut()
            .fold(true, |acc, t| t.fire(info, meta) & acc)
    }

    fn reset(&mut self) {
        self.children.iter_mut().for_each(|t| t.reset());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Direction;
    use proptest::prelude::*;

    fn meta(direction: Direction) -> MetaData {
        MetaData::new("fake", 1, 1, 2, direction).unwrap()
    }

    fn at_eval(evaluations: u64) -> LogInfo {
        LogInfo {
            evaluations,
            ..Default::default()
        }
    }

    fn with_y(y: f64) -> LogInfo {
        LogInfo {
            transformed_y: y,
            ..Default::default()
        }
    }

    #[test]
    fn on_improvement_reference_sequence() {
        let pb = meta(Direction::Minimization);
        let mut t = OnImprovement::new();
        let mut fires = Vec::new();
        for y in [9999.0, 100.0, 100.0, 10.0, 10.0, 99.0, 11.0, 9.0] {
            fires.push(t.fire(&with_y(y), &pb));
        }
        assert_eq!(fires, [true, true, false, true, false, false, false, true]);
        t.reset();
        assert!(t.fire(&with_y(99.0), &pb));
    }

    #[test]
    fn on_improvement_maximization() {
        let pb = meta(Direction::Maximization);
        let mut t = OnImprovement::new();
        assert!(t.fire(&with_y(-5.0), &pb));
        assert!(!t.fire(&with_y(-5.0), &pb));
        assert!(t.fire(&with_y(-4.0), &pb));
        assert!(!t.fire(&with_y(-6.0), &pb));
    }

    #[test]
    fn index_based_triggers() {
        let pb = meta(Direction::Minimization);
        let mut at = At::new([1, 5]);
        assert!(at.fire(&at_eval(5), &pb));
        assert!(!at.fire(&at_eval(4), &pb));
        let mut none = At::new([]);
        assert!(!none.fire(&at_eval(1), &pb));

        let mut each = Each::new(3);
        assert!(each.fire(&at_eval(3), &pb));
        assert!(each.fire(&at_eval(6), &pb));
        assert!(!each.fire(&at_eval(4), &pb));
        let mut offset = Each::starting_at(3, 2);
        assert!(!offset.fire(&at_eval(1), &pb));
        assert!(offset.fire(&at_eval(2), &pb));
        assert!(offset.fire(&at_eval(5), &pb));

        let mut during = During::new([2..=4]);
        assert!(during.fire(&at_eval(2), &pb));
        assert!(during.fire(&at_eval(4), &pb));
        assert!(!during.fire(&at_eval(5), &pb));
        assert!(!during.fire(&at_eval(1), &pb));
    }

    #[test]
    fn each_one_matches_always() {
        let pb = meta(Direction::Minimization);
        let mut each = Each::new(1);
        let mut always = Always;
        for e in 1..=100 {
            assert_eq!(each.fire(&at_eval(e), &pb), always.fire(&at_eval(e), &pb));
        }
    }

    #[test]
    #[should_panic]
    fn each_zero_interval_panics() {
        Each::new(0);
    }

    #[test]
    fn combinators() {
        let pb = meta(Direction::Minimization);
        let mut any = Any::new(vec![Box::new(At::new([2])), Box::new(Each::new(5))]);
        assert!(any.fire(&at_eval(2), &pb));
        assert!(any.fire(&at_eval(10), &pb));
        assert!(!any.fire(&at_eval(3), &pb));
        assert!(!Any::default().fire(&at_eval(1), &pb));
        assert!(All::default().fire(&at_eval(1), &pb));
    }

    #[test]
    fn all_with_always_behaves_as_on_improvement() {
        let pb = meta(Direction::Minimization);
        let mut all = All::new(vec![Box::new(Always), Box::new(OnImprovement::new())]);
        let mut alone = OnImprovement::new();
        for y in [9999.0, 100.0, 100.0, 10.0, 10.0, 99.0, 11.0, 9.0] {
            assert_eq!(all.fire(&with_y(y), &pb), alone.fire(&with_y(y), &pb));
        }
    }

    struct Counting(std::sync::Arc<std::sync::atomic::AtomicUsize>);

    impl Trigger for Counting {
        fn fire(&mut self, _: &LogInfo, _: &MetaData) -> bool {
            self.0.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            false
        }
    }

    #[test]
    fn combinators_do_not_short_circuit() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        use std::sync::Arc;
        let pb = meta(Direction::Minimization);
        let seen = Arc::new(AtomicUsize::new(0));
        let mut any = Any::new(vec![Box::new(Always), Box::new(Counting(seen.clone()))]);
        let mut all = All::new(vec![Box::new(At::new([])), Box::new(Counting(seen.clone()))]);
        assert!(any.fire(&at_eval(1), &pb));
        assert!(!all.fire(&at_eval(1), &pb));
        assert_eq!(seen.load(Ordering::Relaxed), 2);
    }

    #[test]
    fn reset_recurses_into_children() {
        let pb = meta(Direction::Minimization);
        let mut all = All::new(vec![Box::new(OnImprovement::new())]);
        assert!(all.fire(&with_y(10.0), &pb));
        assert!(!all.fire(&with_y(99.0), &pb));
        all.reset();
        assert!(all.fire(&with_y(99.0), &pb));
        let mut always = Always;
        always.reset();
        assert!(always.fire(&at_eval(1), &pb));
    }

    proptest! {
        #[test]
        fn on_improvement_fires_on_running_records(ys in prop::collection::vec(-50i32..50, 0..60)) {
            let pb = meta(Direction::Minimization);
            let mut t = OnImprovement::new();
            let fires: Vec<bool> = ys.iter().map(|&y| t.fire(&with_y(y as f64), &pb)).collect();
            let mut best = i32::MAX;
            let records: Vec<bool> = ys.iter().map(|&y| { let r = y < best; best = best.min(y); r }).collect();
            prop_assert_eq!(fires, records);
        }

        #[test]
        fn any_all_fold_stateless_children(
            sets in prop::collection::vec(prop::collection::vec(1u64..20, 0..5), 0..4),
            eval in 1u64..20,
        ) {
            let pb = meta(Direction::Minimization);
            let info = at_eval(eval);
            let singles: Vec<bool> = sets.iter().map(|s| At::new(s.clone()).fire(&info, &pb)).collect();
            let mut any = Any::new(sets.iter().map(|s| Box::new(At::new(s.clone())) as Box<dyn Trigger>).collect());
            let mut all = All::new(sets.iter().map(|s| Box::new(At::new(s.clone())) as Box<dyn Trigger>).collect());
            prop_assert_eq!(any.fire(&info, &pb), singles.iter().any(|&b| b));
            prop_assert_eq!(all.fire(&info, &pb), singles.iter().all(|&b| b));
        }
    }
}
