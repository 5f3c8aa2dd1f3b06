//! Named accessors for the values recorded at a logged event.
//!
//! A property reads either a field of the [`LogInfo`] context or a host
//! program variable. Host variables are captured through three kinds of
//! bindings:
//!
//! * [`Property::reference`] always reads the bound [`Variable`];
//! * [`Property::pointer`] reads the variable while it is alive and reports
//!   an absent value once every [`Variable`] handle has been dropped (or when
//!   built without a target);
//! * [`Property::slot`] reads through a [`Slot`] which the host may rebind to
//!   another variable or detach at any time.
//!
//! Reads happen when a trigger fires, so a property always reflects the
//! value at the time the event is recorded. Variables are meant to be
//! mutated from the thread driving the problem.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Weak};

use parking_lot::Mutex;

use crate::logging::{LogInfo, LoggedValue};

/// A shareable `f64` cell owned by the host program.
#[derive(Clone, Debug)]
pub struct Variable(Arc<AtomicU64>);

impl Variable {
    pub fn new(value: f64) -> Self {
        Variable(Arc::new(AtomicU64::new(value.to_bits())))
    }

    pub fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    pub fn set(&self, value: f64) {
        self.0.store(value.to_bits(), Ordering::Relaxed);
    }
}

/// A rebindable, possibly empty handle to a [`Variable`].
#[derive(Clone, Debug, Default)]
pub struct Slot(Arc<Mutex<Option<Variable>>>);

impl Slot {
    pub fn detached() -> Self {
        Self::default()
    }

    pub fn bound(target: &Variable) -> Self {
        let slot = Self::default();
        slot.bind(target);
        slot
    }

    pub fn bind(&self, target: &Variable) {
        *self.0.lock() = Some(target.clone());
    }

    pub fn detach(&self) {
        *self.0.lock() = None;
    }

    pub fn is_bound(&self) -> bool {
        self.0.lock().is_some()
    }

    fn read(&self) -> Option<f64> {
        self.0.lock().as_ref().map(Variable::get)
    }
}

#[derive(Clone, Debug)]
pub enum Binding {
    Fixed(Variable),
    Detachable(Weak<AtomicU64>),
    Rebindable(Slot),
}

impl Binding {
    fn read(&self) -> Option<f64> {
        match self {
            Binding::Fixed(v) => Some(v.get()),
            Binding::Detachable(w) => w
                .upgrade()
                .map(|cell| f64::from_bits(cell.load(Ordering::Relaxed))),
            Binding::Rebindable(slot) => slot.read(),
        }
    }
}

/// Fields of the evaluation context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Evaluations,
    RawY,
    RawYBest,
    TransformedY,
    TransformedYBest,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Evaluations => "evaluations",
            Field::RawY => "raw_y",
            Field::RawYBest => "raw_y_best",
            Field::TransformedY => "transformed_y",
            Field::TransformedYBest => "transformed_y_best",
        }
    }

    pub fn read(self, info: &LogInfo) -> f64 {
        match self {
            Field::Evaluations => info.evaluations as f64,
            Field::RawY => info.raw_y,
            Field::RawYBest => info.raw_y_best,
            Field::TransformedY => info.transformed_y,
            Field::TransformedYBest => info.transformed_y_best,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Property {
    Context(Field),
    External { name: String, binding: Binding },
}

impl Property {
    pub fn reference(name: impl Into<String>, target: &Variable) -> Self {
        Property::External {
            name: name.into(),
            binding: Binding::Fixed(target.clone()),
        }
    }

    pub fn pointer(name: impl Into<String>, target: Option<&Variable>) -> Self {
        Property::External {
            name: name.into(),
            binding: Binding::Detachable(target.map_or_else(Weak::new, |v| Arc::downgrade(&v.0))),
        }
    }

    pub fn slot(name: impl Into<String>, slot: &Slot) -> Self {
        Property::External {
            name: name.into(),
            binding: Binding::Rebindable(slot.clone()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Property::Context(f) => f.name(),
            Property::External { name, .. } => name,
        }
    }

    pub fn read(&self, info: &LogInfo) -> LoggedValue {
        match self {
            Property::Context(f) => LoggedValue::present(f.read(info)),
            Property::External { binding, .. } => binding.read().into(),
        }
    }
}

impl From<Field> for Property {
    fn from(f: Field) -> Self {
        Property::Context(f)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Problem, SuiteKind};

    #[test]
    fn context_fields() {
        let info = LogInfo {
            evaluations: 7,
            raw_y: 1.0,
            raw_y_best: 0.5,
            transformed_y: 2.0,
            transformed_y_best: 1.5,
            solution: vec![],
        };
        let read = |f: Field| Property::from(f).read(&info).value().unwrap();
        assert_eq!(read(Field::Evaluations), 7.0);
        assert_eq!(read(Field::RawY), 1.0);
        assert_eq!(read(Field::RawYBest), 0.5);
        assert_eq!(read(Field::TransformedY), 2.0);
        assert_eq!(read(Field::TransformedYBest), 1.5);
    }

    #[test]
    fn running_bests_through_problem() {
        // Sphere in d=1 with x = sqrt(y) gives y directly.
        let mut p = Problem::new(SuiteKind::Continuous, 1, 1, 1).unwrap();
        let mut bests = Vec::new();
        for y in [5.0f64, 3.0, 4.0] {
            p.evaluate(&[y.sqrt()]).unwrap();
            bests.push(p.state().transformed_y_best);
        }
        assert!((bests[0] - 5.0).abs() < 1e-12);
        assert!((bests[1] - 3.0).abs() < 1e-12);
        assert_eq!(bests[1], bests[2]);
        assert_eq!(p.state().transformed_y, p.state().raw_y);
    }

    #[test]
    fn reference_tracks_host_value() {
        let x = Variable::new(0.0);
        let p = Property::reference("x", &x);
        x.set(3.5);
        assert_eq!(p.read(&LogInfo::default()), LoggedValue::present(3.5));
    }

    #[test]
    fn pointer_goes_absent_when_target_dropped() {
        let x = Variable::new(1.0);
        let p = Property::pointer("x", Some(&x));
        assert!(p.read(&LogInfo::default()).is_present());
        drop(x);
        assert_eq!(p.read(&LogInfo::default()), LoggedValue::ABSENT);
        assert!(!Property::pointer("null", None)
            .read(&LogInfo::default())
            .is_present());
    }

    #[test]
    fn slot_rebinds_and_detaches() {
        let a = Variable::new(1.0);
        let b = Variable::new(2.0);
        let slot = Slot::bound(&a);
        let p = Property::slot("s", &slot);
        let info = LogInfo::default();
        assert_eq!(p.read(&info).value(), Some(1.0));
        slot.bind(&b);
        assert_eq!(p.read(&info).value(), Some(2.0));
        b.set(4.0);
        assert_eq!(p.read(&info).value(), Some(4.0));
        slot.detach();
        assert_eq!(p.read(&info), LoggedValue::ABSENT);
        assert!(!slot.is_bound());
    }
}
