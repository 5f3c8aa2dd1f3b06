//! Minimal synthetic benchmark suite.
//!
//! Two suites are provided: a continuous one (`Sphere`, `Rastrigin`, both
//! minimised) and a pseudo-Boolean one (`OneMax`, `LeadingOnes`, both
//! maximised). Every problem instance other than 1 applies a deterministic
//! transformation derived from `(problem_id, instance)`: a shift of the
//! optimum (or an XOR mask for bit strings) and an additive offset. Instance 1
//! is the identity, so its transformed value equals the raw value.
//!
//! The transformation stream is generated by SplitMix64 seeded with
//! [`instance_seed`], which keeps it reproducible in any language.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Weak};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logging::{LogError, LogInfo, Logger, SharedLogger};

/// Constant mixed into every instance seed (the 64-bit golden ratio gamma).
pub const SEED_CONSTANT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Radius of the box the continuous optima are shifted within.
const SHIFT_RADIUS: f64 = 4.0;
/// Additive offsets are drawn uniformly from `[-OFFSET_RANGE, OFFSET_RANGE)`.
const OFFSET_RANGE: f64 = 100.0;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("solution has {got} variables, problem expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable {index} = {value} is not a bit (expected 0 or 1)")]
    NotABit { index: usize, value: f64 },
    #[error("problem f{problem_id} was torn down with its suite")]
    TornDown { problem_id: u32 },
    #[error("no problem with id {problem_id} in the {suite} suite")]
    UnknownProblem { suite: &'static str, problem_id: u32 },
    #[error("invalid metadata: {0}")]
    InvalidMeta(&'static str),
    #[error(transparent)]
    Logger(#[from] LogError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimization,
    Maximization,
}

impl Direction {
    /// The worst representable value: `+inf` when minimising.
    pub fn worst(self) -> f64 {
        match self {
            Direction::Minimization => f64::INFINITY,
            Direction::Maximization => f64::NEG_INFINITY,
        }
    }

    /// `true` iff `a` is strictly better than `b`.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimization => a < b,
            Direction::Maximization => a > b,
        }
    }

    /// `true` iff `a` is at least as good as `b`.
    pub fn is_at_least(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimization => a <= b,
            Direction::Maximization => a >= b,
        }
    }

    pub fn best_of(self, a: f64, b: f64) -> f64 {
        if self.is_better(b, a) {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Minimization => f.write_str("minimization"),
            Direction::Maximization => f.write_str("maximization"),
        }
    }
}

/// Identity of a benchmark context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaData {
    suite_name: String,
    problem_id: u32,
    instance: u32,
    dimension: usize,
    direction: Direction,
}

impl MetaData {
    pub fn new(
        suite_name: impl Into<String>,
        problem_id: u32,
        instance: u32,
        dimension: usize,
        direction: Direction,
    ) -> Result<Self, ProblemError> {
        if problem_id == 0 {
            return Err(ProblemError::InvalidMeta("problem id must be >= 1"));
        }
        if instance == 0 {
            return Err(ProblemError::InvalidMeta("instance must be >= 1"));
        }
        if dimension == 0 {
            return Err(ProblemError::InvalidMeta("dimension must be >= 1"));
        }
        Ok(Self {
            suite_name: suite_name.into(),
            problem_id,
            instance,
            dimension,
            direction,
        })
    }

    pub fn suite_name(&self) -> &str {
        &self.suite_name
    }

    pub fn problem_id(&self) -> u32 {
        self.problem_id
    }

    pub fn instance(&self) -> u32 {
        self.instance
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

impl fmt::Display for MetaData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} pb={}, dim={}, ins={}",
            self.suite_name, self.problem_id, self.dimension, self.instance
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    Continuous,
    PseudoBoolean,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Continuous => "continuous",
            SuiteKind::PseudoBoolean => "boolean",
        }
    }

    pub fn function(self, problem_id: u32) -> Result<Function, ProblemError> {
        match (self, problem_id) {
            (SuiteKind::Continuous, 1) => Ok(Function::Sphere),
            (SuiteKind::Continuous, 2) => Ok(Function::Rastrigin),
            (SuiteKind::PseudoBoolean, 1) => Ok(Function::OneMax),
            (SuiteKind::PseudoBoolean, 2) => Ok(Function::LeadingOnes),
            _ => Err(ProblemError::UnknownProblem {
                suite: self.name(),
                problem_id,
            }),
        }
    }
}

impl std::str::FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "continuous" => Ok(SuiteKind::Continuous),
            "boolean" => Ok(SuiteKind::PseudoBoolean),
            other => Err(format!("unknown suite `{other}` (expected continuous or boolean)")),
        }
    }
}

/// Search domain of a function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// Box-constrained reals, same bounds on every axis.
    Real { lower: f64, upper: f64 },
    /// Bit strings, each variable is `0.0` or `1.0`.
    Bits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Sphere,
    Rastrigin,
    OneMax,
    LeadingOnes,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Sphere => "Sphere",
            Function::Rastrigin => "Rastrigin",
            Function::OneMax => "OneMax",
            Function::LeadingOnes => "LeadingOnes",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Function::Sphere | Function::Rastrigin => Direction::Minimization,
            Function::OneMax | Function::LeadingOnes => Direction::Maximization,
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            Function::Sphere | Function::Rastrigin => Domain::Real {
                lower: -5.0,
                upper: 5.0,
            },
            Function::OneMax | Function::LeadingOnes => Domain::Bits,
        }
    }

    /// Untransformed objective value.
    pub fn raw(self, x: &[f64]) -> f64 {
        match self {
            Function::Sphere => x.iter().map(|v| v * v).sum(),
            Function::Rastrigin => {
                let tau = 2.0 * std::f64::consts::PI;
                10.0 * x.len() as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * (tau * v).cos())
                        .sum::<f64>()
            }
            Function::OneMax => x.iter().filter(|&&b| b == 1.0).count() as f64,
            Function::LeadingOnes => x.iter().take_while(|&&b| b == 1.0).count() as f64,
        }
    }
}

/// One step of the SplitMix64 generator.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(SEED_CONSTANT);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the transformation stream of `(problem_id, instance)`.
pub fn instance_seed(problem_id: u32, instance: u32) -> u64 {
    let mut state = ((problem_id as u64) << 32 | instance as u64) ^ SEED_CONSTANT;
    splitmix64(&mut state)
}

fn unit_interval(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Debug, PartialEq)]
enum Transform {
    Identity,
    Shift { optimum: Vec<f64>, offset: f64 },
    Mask { mask: Vec<bool>, offset: f64 },
}

impl Transform {
    fn new(function: Function, problem_id: u32, instance: u32, dimension: usize) -> Self {
        if instance == 1 {
            return Transform::Identity;
        }
        let mut state = instance_seed(problem_id, instance);
        let offset = (2.0 * unit_interval(&mut state) - 1.0) * OFFSET_RANGE;
        match function.domain() {
            Domain::Real { .. } => Transform::Shift {
                optimum: (0..dimension)
                    .map(|_| (2.0 * unit_interval(&mut state) - 1.0) * SHIFT_RADIUS)
                    .collect(),
                offset,
            },
            Domain::Bits => Transform::Mask {
                mask: (0..dimension)
                    .map(|_| splitmix64(&mut state) & 1 == 1)
                    .collect(),
                offset,
            },
        }
    }

    fn apply(&self, function: Function, x: &[f64], raw: f64) -> f64 {
        match self {
            Transform::Identity => raw,
            Transform::Shift { optimum, offset } => {
                let shifted: Vec<f64> = x.iter().zip(optimum).map(|(v, o)| v - o).collect();
                function.raw(&shifted) + offset
            }
            Transform::Mask { mask, offset } => {
                let flipped: Vec<f64> = x
                    .iter()
                    .zip(mask)
                    .map(|(&v, &m)| if m { 1.0 - v } else { v })
                    .collect();
                function.raw(&flipped) + offset
            }
        }
    }
}

/// Evaluation counters and best-so-far values of a problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemState {
    pub evaluations: u64,
    pub raw_y: f64,
    pub raw_y_best: f64,
    pub transformed_y: f64,
    pub transformed_y_best: f64,
    pub current_solution: Vec<f64>,
}

impl ProblemState {
    fn fresh(direction: Direction) -> Self {
        Self {
            evaluations: 0,
            raw_y: direction.worst(),
            raw_y_best: direction.worst(),
            transformed_y: direction.worst(),
            transformed_y_best: direction.worst(),
            current_solution: Vec::new(),
        }
    }
}

type WeakLogger = Weak<Mutex<dyn Logger + Send>>;

fn attach_weak(loggers: &mut Vec<WeakLogger>, logger: &SharedLogger, meta: Option<&MetaData>) {
    let weak = Arc::downgrade(logger);
    if loggers.iter().any(|l| Weak::ptr_eq(l, &weak)) {
        log::warn!("logger already attached, ignoring second attach");
        return;
    }
    if let Some(meta) = meta {
        log::debug!("attach to: {meta}");
        logger.lock().attach(meta);
    }
    loggers.push(weak);
}

/// A benchmark problem instance with its evaluation state.
pub struct Problem {
    function: Function,
    meta: MetaData,
    transform: Transform,
    state: ProblemState,
    run: usize,
    loggers: Vec<WeakLogger>,
    torn_down: Option<Arc<AtomicBool>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("function", &self.function)
            .field("meta", &self.meta)
            .field("run", &self.run)
            .field("state", &self.state)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        kind: SuiteKind,
        problem_id: u32,
        instance: u32,
        dimension: usize,
    ) -> Result<Self, ProblemError> {
        let function = kind.function(problem_id)?;
        let meta = MetaData::new(
            kind.name(),
            problem_id,
            instance,
            dimension,
            function.direction(),
        )?;
        Ok(Self {
            function,
            transform: Transform::new(function, problem_id, instance, dimension),
            state: ProblemState::fresh(function.direction()),
            meta,
            run: 0,
            loggers: Vec::new(),
            torn_down: None,
        })
    }

    pub fn meta(&self) -> &MetaData {
        &self.meta
    }

    pub fn function(&self) -> Function {
        self.function
    }

    pub fn state(&self) -> &ProblemState {
        &self.state
    }

    /// Zero-based index of the current run.
    pub fn run(&self) -> usize {
        self.run
    }

    /// Evaluates `x`, updates the state and notifies every live logger.
    ///
    /// Logger failures are reported after all loggers have been notified.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64, ProblemError> {
        if self
            .torn_down
            .as_ref()
            .is_some_and(|flag| flag.load(Ordering::Acquire))
        {
            return Err(ProblemError::TornDown {
                problem_id: self.meta.problem_id,
            });
        }
        if x.len() != self.meta.dimension {
            return Err(ProblemError::DimensionMismatch {
                expected: self.meta.dimension,
                got: x.len(),
            });
        }
        if self.function.domain() == Domain::Bits {
            if let Some((index, &value)) = x.iter().enumerate().find(|(_, &v)| v != 0.0 && v != 1.0)
            {
                return Err(ProblemError::NotABit { index, value });
            }
        }

        let direction = self.meta.direction;
        let raw = self.function.raw(x);
        let transformed = self.transform.apply(self.function, x, raw);

        let state = &mut self.state;
        state.evaluations += 1;
        state.raw_y = raw;
        state.transformed_y = transformed;
        state.raw_y_best = direction.best_of(state.raw_y_best, raw);
        state.transformed_y_best = direction.best_of(state.transformed_y_best, transformed);
        state.current_solution.clear();
        state.current_solution.extend_from_slice(x);

        let info = LogInfo {
            evaluations: state.evaluations,
            raw_y: raw,
            raw_y_best: state.raw_y_best,
            transformed_y: transformed,
            transformed_y_best: state.transformed_y_best,
            solution: x.to_vec(),
        };

        let mut first_error = None;
        self.loggers.retain(|weak| match weak.upgrade() {
            Some(logger) => {
                if let Err(e) = logger.lock().call(&info) {
                    first_error.get_or_insert(e);
                }
                true
            }
            None => false,
        });
        match first_error {
            Some(e) => Err(e.into()),
            None => Ok(transformed),
        }
    }

    /// Starts a new run: state is re-initialised and loggers are told.
    pub fn reset(&mut self) {
        self.state = ProblemState::fresh(self.meta.direction);
        self.run += 1;
        self.loggers.retain(|weak| match weak.upgrade() {
            Some(logger) => {
                logger.lock().reset();
                true
            }
            None => false,
        });
    }

    /// Attaches a logger; the problem keeps only a weak handle, so dropping
    /// every strong handle detaches it.
    pub fn attach_logger<L: Logger + Send + 'static>(&mut self, logger: &Arc<Mutex<L>>) {
        let shared: SharedLogger = logger.clone();
        self.attach_shared(&shared);
    }

    pub fn attach_shared(&mut self, logger: &SharedLogger) {
        attach_weak(&mut self.loggers, logger, Some(&self.meta));
    }

    /// Number of loggers still alive.
    pub fn logger_count(&self) -> usize {
        self.loggers.iter().filter(|w| w.strong_count() > 0).count()
    }
}

fn ordered_set<T: Ord + Copy>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Cross product of problems, dimensions and instances, iterated in
/// `(problem, dimension, instance)` lexicographic order.
///
/// Each yielded [`Problem`] is torn down when the suite advances past it or
/// is dropped.
pub struct Suite {
    kind: SuiteKind,
    cells: Vec<(u32, usize, u32)>,
    next: usize,
    loggers: Vec<WeakLogger>,
    live: Option<Arc<AtomicBool>>,
}

impl Suite {
    pub fn new(
        kind: SuiteKind,
        problem_ids: &[u32],
        instances: &[u32],
        dimensions: &[usize],
    ) -> Result<Self, ProblemError> {
        let problem_ids = ordered_set(problem_ids);
        let instances = ordered_set(instances);
        let dimensions = ordered_set(dimensions);
        for &id in &problem_ids {
            kind.function(id)?;
        }
        if problem_ids.is_empty() || instances.is_empty() || dimensions.is_empty() {
            return Err(ProblemError::InvalidMeta(
                "suite needs at least one problem, instance and dimension",
            ));
        }
        if instances.contains(&0) {
            return Err(ProblemError::InvalidMeta("instance must be >= 1"));
        }
        if dimensions.contains(&0) {
            return Err(ProblemError::InvalidMeta("dimension must be >= 1"));
        }
        let mut cells = Vec::new();
        for &p in &problem_ids {
            for &d in &dimensions {
                for &i in &instances {
                    cells.push((p, d, i));
                }
            }
        }
        Ok(Self {
            kind,
            cells,
            next: 0,
            loggers: Vec::new(),
            live: None,
        })
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn kind(&self) -> SuiteKind {
        self.kind
    }

    /// Number of (problem, dimension, instance) cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Attaches `logger` to every problem yielded from now on.
    pub fn attach_logger<L: Logger + Send + 'static>(&mut self, logger: &Arc<Mutex<L>>) {
        let shared: SharedLogger = logger.clone();
        self.attach_shared(&shared);
    }

    pub fn attach_shared(&mut self, logger: &SharedLogger) {
        attach_weak(&mut self.loggers, logger, None);
    }

    fn tear_down_current(&mut self) {
        if let Some(flag) = self.live.take() {
            flag.store(true, Ordering::Release);
        }
    }
}

impl Iterator for Suite {
    type Item = Problem;

    fn next(&mut self) -> Option<Problem> {
        self.tear_down_current();
        let &(problem_id, dimension, instance) = self.cells.get(self.next)?;
        self.next += 1;
        let mut problem = Problem::new(self.kind, problem_id, instance, dimension)
            .expect("cells are validated at construction");
        let flag = Arc::new(AtomicBool::new(false));
        problem.torn_down = Some(flag.clone());
        self.live = Some(flag);
        self.loggers.retain(|weak| match weak.upgrade() {
            Some(logger) => {
                problem.attach_shared(&logger);
                true
            }
            None => false,
        });
        Some(problem)
    }
}

impl Drop for Suite {
    fn drop(&mut self) {
        self.tear_down_current();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Default)]
    struct Recorder {
        attached: Vec<MetaData>,
        calls: Vec<u64>,
        resets: usize,
    }

    impl Logger for Recorder {
        fn attach(&mut self, meta: &MetaData) {
            self.attached.push(meta.clone());
        }

        fn call(&mut self, info: &LogInfo) -> Result<(), LogError> {
            self.calls.push(info.evaluations);
            Ok(())
        }

        fn reset(&mut self) {
            self.resets += 1;
        }
    }

    #[test]
    fn sphere_values() {
        let mut p = Problem::new(SuiteKind::Continuous, 1, 1, 2).unwrap();
        assert_eq!(p.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(p.evaluate(&[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(p.state().raw_y, 2.0);
        assert_eq!(p.state().raw_y_best, 0.0);
        assert_eq!(p.state().evaluations, 2);
    }

    #[test]
    fn onemax_counts_ones() {
        let mut p = Problem::new(SuiteKind::PseudoBoolean, 1, 1, 4).unwrap();
        assert_eq!(p.meta().direction(), Direction::Maximization);
        assert_eq!(p.evaluate(&[1.0, 0.0, 1.0, 1.0]).unwrap(), 3.0);
    }

    #[test]
    fn leading_ones_and_rastrigin_optimum() {
        let mut p = Problem::new(SuiteKind::PseudoBoolean, 2, 1, 4).unwrap();
        assert_eq!(p.evaluate(&[1.0, 1.0, 0.0, 1.0]).unwrap(), 2.0);
        let mut r = Problem::new(SuiteKind::Continuous, 2, 1, 3).unwrap();
        assert!(r.evaluate(&[0.0; 3]).unwrap().abs() < 1e-12);
        assert!(r.evaluate(&[0.5; 3]).unwrap() > 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut p = Problem::new(SuiteKind::Continuous, 1, 1, 2).unwrap();
        assert!(matches!(
            p.evaluate(&[1.0]),
            Err(ProblemError::DimensionMismatch { expected: 2, got: 1 })
        ));
        let mut b = Problem::new(SuiteKind::PseudoBoolean, 1, 1, 2).unwrap();
        assert!(matches!(
            b.evaluate(&[1.0, 0.5]),
            Err(ProblemError::NotABit { index: 1, .. })
        ));
        assert!(Problem::new(SuiteKind::Continuous, 3, 1, 2).is_err());
        assert!(Problem::new(SuiteKind::Continuous, 1, 0, 2).is_err());
        assert!(Problem::new(SuiteKind::Continuous, 1, 1, 0).is_err());
    }

    #[test]
    fn instance_one_is_identity_and_others_are_deterministic() {
        let x = [0.3, -1.2, 2.5];
        let mut p1 = Problem::new(SuiteKind::Continuous, 2, 1, 3).unwrap();
        p1.evaluate(&x).unwrap();
        assert_eq!(p1.state().raw_y, p1.state().transformed_y);

        let mut a = Problem::new(SuiteKind::Continuous, 2, 5, 3).unwrap();
        let mut b = Problem::new(SuiteKind::Continuous, 2, 5, 3).unwrap();
        let ya = a.evaluate(&x).unwrap();
        assert_eq!(ya, b.evaluate(&x).unwrap());
        assert_eq!(a.state().raw_y, p1.state().raw_y);
        assert_ne!(ya, a.state().raw_y);

        let mut c = Problem::new(SuiteKind::PseudoBoolean, 1, 3, 8).unwrap();
        let mut d = Problem::new(SuiteKind::PseudoBoolean, 1, 3, 8).unwrap();
        let bits = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(c.evaluate(&bits).unwrap(), d.evaluate(&bits).unwrap());
    }

    #[test]
    fn shifted_optimum_is_reached_at_zero_raw_distance() {
        let p = Problem::new(SuiteKind::Continuous, 1, 2, 4).unwrap();
        let Transform::Shift { optimum, offset } = &p.transform else {
            panic!("instance 2 must be shifted");
        };
        assert!(optimum.iter().all(|o| o.abs() <= SHIFT_RADIUS));
        let mut p = p.clone_fresh();
        let opt = optimum.clone();
        let y = p.evaluate(&opt).unwrap();
        assert_eq!(y, *offset);
    }

    impl Problem {
        fn clone_fresh(&self) -> Problem {
            Problem::new(
                SuiteKind::Continuous,
                self.meta.problem_id,
                self.meta.instance,
                self.meta.dimension,
            )
            .unwrap()
        }
    }

    #[test]
    fn bests_track_direction() {
        let mut p = Problem::new(SuiteKind::PseudoBoolean, 1, 1, 3).unwrap();
        let mut bests = Vec::new();
        for x in [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]] {
            p.evaluate(&x).unwrap();
            bests.push(p.state().transformed_y_best);
        }
        assert_eq!(bests, vec![1.0, 3.0, 3.0]);
    }

    #[test]
    fn reset_reinitialises_state() {
        let mut p = Problem::new(SuiteKind::Continuous, 1, 1, 2).unwrap();
        for _ in 0..10 {
            p.evaluate(&[0.5, 0.5]).unwrap();
        }
        assert_eq!(p.state().evaluations, 10);
        p.reset();
        assert_eq!(p.state().evaluations, 0);
        assert_eq!(p.state().transformed_y_best, f64::INFINITY);
        assert_eq!(p.run(), 1);
        let snapshot = p.state().clone();
        p.reset();
        assert_eq!(p.state(), &snapshot);
        assert_eq!(p.run(), 2);
    }

    #[test]
    fn logger_sees_attach_calls_and_resets() {
        let rec = Arc::new(Mutex::new(Recorder::default()));
        let mut p = Problem::new(SuiteKind::Continuous, 2, 1, 2).unwrap();
        p.attach_logger(&rec);
        p.attach_logger(&rec);
        assert_eq!(p.logger_count(), 1);
        p.evaluate(&[0.0, 1.0]).unwrap();
        p.reset();
        p.evaluate(&[0.0, 1.0]).unwrap();
        let r = rec.lock();
        assert_eq!(r.attached.len(), 1);
        assert_eq!(r.attached[0].problem_id(), 2);
        assert_eq!(r.calls, vec![1, 1]);
        assert_eq!(r.resets, 1);
    }

    #[test]
    fn dropped_logger_is_detached() {
        let rec = Arc::new(Mutex::new(Recorder::default()));
        let mut p = Problem::new(SuiteKind::Continuous, 1, 1, 1).unwrap();
        p.attach_logger(&rec);
        drop(rec);
        p.evaluate(&[1.0]).unwrap();
        assert_eq!(p.logger_count(), 0);
    }

    #[test]
    fn suite_order_and_attach_events() {
        let rec = Arc::new(Mutex::new(Recorder::default()));
        let mut suite = Suite::new(SuiteKind::Continuous, &[2, 1], &[1, 2], &[30, 10]).unwrap();
        suite.attach_logger(&rec);
        assert_eq!(suite.len(), 8);
        let order: Vec<(u32, usize, u32)> = suite
            .map(|p| (p.meta().problem_id(), p.meta().dimension(), p.meta().instance()))
            .collect();
        assert_eq!(
            order,
            vec![
                (1, 10, 1),
                (1, 10, 2),
                (1, 30, 1),
                (1, 30, 2),
                (2, 10, 1),
                (2, 10, 2),
                (2, 30, 1),
                (2, 30, 2)
            ]
        );
        assert_eq!(rec.lock().attached.len(), 8);
    }

    #[test]
    fn suite_tears_down_previous_problem() {
        let mut suite = Suite::new(SuiteKind::Continuous, &[1, 2], &[1], &[2]).unwrap();
        let mut first = suite.next().unwrap();
        first.evaluate(&[0.0, 0.0]).unwrap();
        let mut second = suite.next().unwrap();
        assert!(matches!(
            first.evaluate(&[0.0, 0.0]),
            Err(ProblemError::TornDown { problem_id: 1 })
        ));
        second.evaluate(&[0.0, 0.0]).unwrap();
        drop(suite);
        assert!(second.evaluate(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn seed_mixing_is_stable() {
        // SplitMix64 reference output for state 0 after one step.
        let mut s = 0u64;
        assert_eq!(splitmix64(&mut s), 0xE220_A839_7B1D_CDAF);
        assert_ne!(instance_seed(1, 2), instance_seed(2, 1));
    }
}
