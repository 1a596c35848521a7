//! Staged versus oracle evaluation counts on seeded totally positive
//! inputs.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::positivity::{random_tp, staged_minor_count, tp_oracle, tp_staged, Method, PositivityVerdict, Status};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub d: usize,
    pub method: Method,
    pub samples: usize,
    /// Total determinant evaluations over all samples.
    pub evaluations: u64,
    /// Evaluations per input when every input needed the same count.
    pub per_input: Option<u64>,
    pub positive: usize,
    /// Inputs whose status differs between the two methods.
    pub disagreements: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub samples: usize,
    pub rows: Vec<BenchRow>,
    pub environment: String,
}

fn environment() -> String {
    format!(
        "posiflag {} {}-{} profile={}",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::ARCH,
        std::env::consts::OS,
        if cfg!(debug_assertions) { "debug" } else { "release" }
    )
}

/// Seed of the `i`-th input at dimension `d`.
pub fn input_seed(seed: u64, d: usize, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add((d as u64) << 32).wrapping_add(i as u64)
}

/// Runs both methods on `samples` seeded `random_tp` inputs per `d`.
pub fn bench(d_range: RangeInclusive<usize>, samples: usize, seed: u64) -> Result<BenchReport> {
    if *d_range.start() < 2 || d_range.is_empty() {
        return Err(Error::BadParameters(format!(
            "dimension range {d_range:?} must be nonempty and start at 2 or more"
        )));
    }
    if samples == 0 {
        return Err(Error::BadParameters("samples must be positive".into()));
    }
    let mut rows = Vec::new();
    for d in d_range {
        let inputs: Vec<_> = (0..samples).map(|i| random_tp(d, input_seed(seed, d, i))).collect();
        let run =
            |f: fn(&crate::linalg::Matrix) -> Result<PositivityVerdict>| -> Result<(Vec<PositivityVerdict>, Duration)> {
                let start = Instant::now();
                let verdicts = inputs.iter().map(f).collect::<Result<Vec<_>>>()?;
                Ok((verdicts, start.elapsed()))
            };
        let (staged, staged_time) = run(tp_staged)?;
        let (oracle, oracle_time) = run(tp_oracle)?;
        let disagreements = staged.iter().zip(&oracle).filter(|(a, b)| a.status != b.status).count();
        for (method, verdicts, elapsed) in
            [(Method::Staged, &staged, staged_time), (Method::Oracle, &oracle, oracle_time)]
        {
            let counts: Vec<u64> = verdicts.iter().map(|v| v.evaluations).collect();
            rows.push(BenchRow {
                d,
                method,
                samples,
                evaluations: counts.iter().sum(),
                per_input: counts.iter().all(|&c| c == counts[0]).then_some(counts[0]),
                positive: verdicts.iter().filter(|v| v.status == Status::Positive).count(),
                disagreements,
                elapsed,
            });
        }
    }
    Ok(BenchReport { seed, samples, rows, environment: environment() })
}

impl BenchReport {
    pub fn row(&self, d: usize, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.d == d && r.method == method)
    }

    /// Whether every staged row on all-positive inputs used exactly
    /// `staged_minor_count(d)` evaluations per input.
    pub fn staged_counts_match(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.method == Method::Staged && r.positive == r.samples)
            .all(|r| r.per_input == Some(staged_minor_count(r.d)))
    }

    /// Line-oriented `key=value` records. Everything except `micros` is
    /// deterministic in `(range, samples, seed)`.
    pub fn machine(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "record=bench seed={} samples={} env={}",
            self.seed,
            self.samples,
            self.environment.replace(' ', "_")
        )
        .unwrap();
        for r in &self.rows {
            let per = r.per_input.map_or("mixed".to_string(), |p| p.to_string());
            writeln!(
                out,
                "record=bench-row d={} method={} evaluations={} per_input={} positive={} disagreements={} micros={}",
                r.d,
                r.method,
                r.evaluations,
                per,
                r.positive,
                r.disagreements,
                r.elapsed.as_micros()
            )
            .unwrap();
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}  seed {}  {} samples per dimension", self.environment, self.seed, self.samples).unwrap();
        writeln!(
            out,
            "{:>3} {:>7} {:>12} {:>10} {:>9} {:>12}",
            "d", "method", "evaluations", "per input", "positive", "time"
        )
        .unwrap();
        for r in &self.rows {
            let per = r.per_input.map_or("mixed".to_string(), |p| p.to_string());
            writeln!(
                out,
                "{:>3} {:>7} {:>12} {:>10} {:>9} {:>12.3?}",
                r.d,
                r.method.to_string(),
                r.evaluations,
                per,
                r.positive,
                r.elapsed
            )
            .unwrap();
        }
        out
    }
}
