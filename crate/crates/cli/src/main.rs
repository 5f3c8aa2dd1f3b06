use std::path::PathBuf;
use std::process::ExitCode;

use anytime::attainment::{AttainmentPoint, Scale};
use anytime::{Direction, SuiteKind};
use anytime_bench::runner::{self, LoggerSpec, RunConfig};
use anytime_bench::solvers::SolverKind;
use anytime_bench::{commands, CliError};
use clap::{Args, Parser, Subcommand};

/// Benchmark anytime heuristics and analyse their attainment.
#[derive(Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a reference solver over a suite with loggers attached.
    Run(RunArgs),
    /// Level sets of a trajectory file as JSON.
    Eaf {
        #[arg(long = "in")]
        input: PathBuf,
        /// Zero-based level indices.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        direction: DirectionArg,
    },
    /// Attainment histogram of a trajectory file as CSV.
    Eah {
        #[arg(long = "in")]
        input: PathBuf,
        /// Time x quality bucket counts.
        #[arg(long, default_value = "20x20", value_parser = parse_buckets)]
        buckets: (usize, usize),
        /// Time and quality scales.
        #[arg(long, default_value = "linear,linear", value_parser = parse_scales)]
        scale: (Scale, Scale),
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        direction: DirectionArg,
    },
    /// Surfaces and volume of level sets as a TSV table.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Reference point as TIME,QUALITY; defaults to the worst point.
        #[arg(long, value_parser = parse_nadir)]
        nadir: Option<AttainmentPoint>,
        /// Zero-based level indices; defaults to all levels.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        direction: DirectionArg,
    },
}

#[derive(Args)]
struct DirectionArg {
    /// Qualities in the input are maximised.
    #[arg(long)]
    maximize: bool,
}

impl DirectionArg {
    fn get(&self) -> Direction {
        if self.maximize {
            Direction::Maximization
        } else {
            Direction::Minimization
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "continuous")]
    suite: SuiteKind,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    problems: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    instances: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "10")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 100)]
    budget: u64,
    #[arg(long, default_value = "random")]
    solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Loggers: eaf, eah, store, flatfile.
    #[arg(long = "log", value_delimiter = ',', default_value = "eaf")]
    loggers: Vec<LoggerSpec>,
    /// Histogram buckets used by the eah logger.
    #[arg(long, default_value = "20x20", value_parser = parse_buckets)]
    eah_buckets: (usize, usize),
    /// Histogram scales used by the eah logger.
    #[arg(long, default_value = "linear,linear", value_parser = parse_scales)]
    eah_scale: (Scale, Scale),
    /// Zero-based level indices exported by the eaf logger.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> RunConfig {
        let (buckets, scales) = (self.eah_buckets, self.eah_scale);
        RunConfig {
            suite: self.suite,
            problems: self.problems,
            instances: self.instances,
            dimensions: self.dims,
            runs: self.runs,
            budget: self.budget,
            solver: self.solver,
            seed: self.seed,
            loggers: self
                .loggers
                .into_iter()
                .map(|l| match l {
                    LoggerSpec::Eah { .. } => LoggerSpec::Eah { buckets, scales },
                    other => other,
                })
                .collect(),
            levels: self.levels,
            out: self.out,
        }
    }
}

fn pair(s: &str, sep: char) -> Result<(&str, &str), String> {
    s.split_once(sep)
        .ok_or_else(|| format!("expected two values separated by `{sep}`, got `{s}`"))
}

fn parse_buckets(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = pair(s, 'x')?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_scales(s: &str) -> Result<(Scale, Scale), String> {
    let (a, b) = pair(s, ',')?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_nadir(s: &str) -> Result<AttainmentPoint, String> {
    let (t, q) = pair(s, ',')?;
    let time = t.trim().parse().map_err(|e| format!("`{t}`: {e}"))?;
    let quality = q.trim().parse().map_err(|e| format!("`{q}`: {e}"))?;
    Ok(AttainmentPoint::new(time, quality))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(args) => {
            let outcome = runner::run(&args.into_config())?;
            print!("{}", outcome.summary.to_tsv());
        }
        Command::Eaf {
            input,
            levels,
            out,
            direction,
        } => commands::eaf(&input, &levels, &out, direction.get())?,
        Command::Eah {
            input,
            buckets,
            scale,
            out,
            direction,
        } => commands::eah_file(&input, buckets, scale, &out, direction.get())?,
        Command::Stats {
            input,
            nadir,
            levels,
            normalized,
            direction,
        } => print!(
            "{}",
            commands::stats(&input, nadir, levels.as_deref(), normalized, direction.get())?
        ),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
