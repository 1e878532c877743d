//! Wall-time comparison of collision backends, min-of-k repetitions.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::sieve::{run, Backend, SieveConfig, SieveError};
use crate::verify::classical_sieve_oracle;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub bound: i64,
    /// Backend name, or `oracle` for the reference Eratosthenes row.
    pub engine: String,
    pub repetitions: usize,
    pub min_wall: Duration,
    /// `None` for the oracle, which keeps no collision index.
    pub index_size: Option<usize>,
    pub prime_count: usize,
}

pub const BENCH_COLUMNS: [&str; 6] = [
    "bound",
    "engine",
    "repetitions",
    "min_wall_ms",
    "index_size",
    "prime_count",
];

/// Times every `(bound, backend)` combination plus one oracle row per bound.
/// Optimized backends run with their default short-circuiting.
pub fn run_bench(
    bounds: &[i64],
    backends: &[Backend],
    repetitions: usize,
    override_memory_ceiling: bool,
) -> Result<Vec<BenchRow>, SieveError> {
    let repetitions = repetitions.max(1);
    // refuse up front rather than after timing the smaller bounds
    for &bound in bounds {
        SieveConfig::new(bound, Backend::Hash)
            .with_memory_override(override_memory_ceiling)
            .validate()?;
    }
    let mut rows = Vec::new();
    for &bound in bounds {
        for &backend in backends {
            let config =
                SieveConfig::new(bound, backend).with_memory_override(override_memory_ceiling);
            let mut best = Duration::MAX;
            let mut last = None;
            for _ in 0..repetitions {
                let start = Instant::now();
                let res = run(&config)?;
                best = best.min(start.elapsed());
                last = Some(res);
            }
            let res = last.expect("at least one repetition");
            rows.push(BenchRow {
                bound,
                engine: backend.to_string(),
                repetitions,
                min_wall: best,
                index_size: Some(res.stats.distinct_conjugates),
                prime_count: res.primes.len(),
            });
        }
        let mut best = Duration::MAX;
        let mut count = 0;
        for _ in 0..repetitions {
            let start = Instant::now();
            count = classical_sieve_oracle(bound).len();
            best = best.min(start.elapsed());
        }
        rows.push(BenchRow {
            bound,
            engine: "oracle".into(),
            repetitions,
            min_wall: best,
            index_size: None,
            prime_count: count,
        });
    }
    Ok(rows)
}

/// Tab-separated table; oracle rows carry `-` for the index size.
pub fn write_bench<W: Write>(rows: &[BenchRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", BENCH_COLUMNS.join("\t"))?;
    for r in rows {
        let size = r
            .index_size
            .map(|s| s.to_string())
            .unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{}\t{}\t{}\t{:.3}\t{}\t{}",
            r.bound,
            r.engine,
            r.repetitions,
            r.min_wall.as_secs_f64() * 1e3,
            size,
            r.prime_count
        )?;
    }
    out.flush()
}
