//! Reference solvers used to generate trajectories.

use std::str::FromStr;

use anytime::problems::{Domain, ProblemError};
use anytime::Problem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    RandomSearch,
    HillClimber,
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" | "random-search" => Ok(SolverKind::RandomSearch),
            "hill" | "hill-climber" | "greedy-hill-climber" => Ok(SolverKind::HillClimber),
            other => Err(format!("unknown solver `{other}` (expected random or hill-climber)")),
        }
    }
}

fn uniform_solution(domain: Domain, dimension: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match domain {
        Domain::Real { lower, upper } => (0..dimension)
            .map(|_| rng.random_range(lower..upper))
            .collect(),
        Domain::Bits => (0..dimension)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
            .collect(),
    }
}

fn mutate(domain: Domain, x: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut y = x.to_vec();
    match domain {
        Domain::Real { lower, upper } => {
            let step = Normal::new(0.0, 0.1 * (upper - lower)).expect("positive sigma");
            for v in &mut y {
                *v = (*v + step.sample(rng)).clamp(lower, upper);
            }
        }
        Domain::Bits => {
            let i = rng.random_range(0..y.len());
            y[i] = 1.0 - y[i];
        }
    }
    y
}

impl SolverKind {
    /// Spends `budget` evaluations on `problem`.
    pub fn solve(
        self,
        problem: &mut Problem,
        budget: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<(), ProblemError> {
        let domain = problem.function().domain();
        let dimension = problem.meta().dimension();
        match self {
            SolverKind::RandomSearch => {
                for _ in 0..budget {
                    problem.evaluate(&uniform_solution(domain, dimension, rng))?;
                }
            }
            SolverKind::HillClimber => {
                let direction = problem.meta().direction();
                let mut x = uniform_solution(domain, dimension, rng);
                let mut fx = problem.evaluate(&x)?;
                for _ in 1..budget {
                    let y = mutate(domain, &x, rng);
                    let fy = problem.evaluate(&y)?;
                    if direction.is_at_least(fy, fx) {
                        x = y;
                        fx = fy;
                    }
                }
            }
        }
        Ok(())
    }
}
