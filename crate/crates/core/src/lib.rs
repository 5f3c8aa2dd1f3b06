//! Benchmarking toolkit for anytime stochastic optimization heuristics.
//!
//! The crate is organised around a small observer architecture:
//!
//! * [`problems`] provides deterministic synthetic objective functions which
//!   count evaluations, track best-so-far values and notify attached loggers.
//! * [`triggers`] decide *when* an evaluation is worth logging.
//! * [`properties`] decide *what* is recorded, including host-program
//!   variables that may be absent in some contexts.
//! * [`logging`] holds the [`Logger`](logging::Logger) contract and the
//!   composite loggers (fan-out, in-memory store, flat files).
//! * [`attainment`] turns per-run best-so-far trajectories into empirical
//!   attainment functions, histograms and scalar statistics.

pub mod attainment;
pub mod logging;
pub mod problems;
pub mod properties;
pub mod triggers;

pub use logging::{LogInfo, Logger, SharedLogger};
pub use problems::{Direction, MetaData, Problem, Suite, SuiteKind};
