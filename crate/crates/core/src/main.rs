use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use moebius_sieve::analysis::{gap_report_with, probe_intersection, AnalysisError};
use moebius_sieve::bench::{run_bench, write_bench};
use moebius_sieve::trace_io::{
    write_gap_report, write_summary, write_trace, SummaryFormat, TraceError,
};
use moebius_sieve::{run, verify, Backend, SieveConfig, SieveError};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "moebius-sieve",
    version,
    about = "Prime sieve by conjugate-imbalance collisions"
)]
struct Cli {
    /// Allow bounds above the memory ceiling.
    #[arg(long, global = true)]
    override_memory_ceiling: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the primes below a bound.
    Sieve {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        bound: i64,
        #[arg(long, default_value = "hash")]
        backend: Backend,
        /// Scan every q even after p is known composite.
        #[arg(long)]
        full_scan: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the sieve with an Eratosthenes oracle; prints SUCCESS on a match.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        bound: i64,
        #[arg(long, default_value = "hash")]
        backend: Backend,
    },
    /// Write the full per-pair trace CSV.
    Trace {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        bound: i64,
        #[arg(long, default_value = "baseline")]
        backend: Backend,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersect the prime imbalance set with its conjugate image.
    Intersect {
        #[arg(long, value_parser = clap::value_parser!(i64).range(3..))]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
    /// Per-gap table of composites and the collisions that excluded them.
    Gaps {
        #[arg(long, value_parser = clap::value_parser!(i64).range(5..))]
        bound: i64,
        #[arg(long, default_value = "hash")]
        backend: Backend,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time backends against each other and the oracle.
    Bench {
        #[arg(long, value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(i64).range(2..))]
        bounds: Vec<i64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "baseline,hash,farey_trie"
        )]
        backends: Vec<Backend>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Plain,
    Rows,
    Structured,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: Option<&Path>, err: impl std::fmt::Display) -> Self {
        let message = match path {
            Some(p) => format!("{}: {err}", p.display()),
            None => err.to_string(),
        };
        Failure {
            code: EXIT_IO,
            message,
        }
    }
}

impl From<SieveError> for Failure {
    fn from(err: SieveError) -> Self {
        let code = match err {
            SieveError::InvalidBound(_) | SieveError::WrongEngine { .. } => EXIT_USAGE,
            SieveError::MemoryCeiling { .. } | SieveError::Arithmetic { .. } => EXIT_RESOURCE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(err: AnalysisError) -> Self {
        match err {
            AnalysisError::Sieve(e) => e.into(),
            AnalysisError::Ratio(e) => Failure {
                code: EXIT_RESOURCE,
                message: e.to_string(),
            },
            other => Failure {
                code: EXIT_USAGE,
                message: other.to_string(),
            },
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::io(Some(p), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: Cli) -> Result<u8, Failure> {
    let ceiling = cli.override_memory_ceiling;
    match cli.command {
        Command::Sieve {
            bound,
            backend,
            full_scan,
            format,
            out,
        } => {
            let mut config = SieveConfig::new(bound, backend).with_memory_override(ceiling);
            if full_scan {
                config = config.with_short_circuit(false);
            }
            let result = run(&config)?;
            let mut w = open_output(out.as_deref())?;
            let written = match format {
                Format::Plain => {
                    let list: Vec<String> = result.primes.iter().map(|p| p.to_string()).collect();
                    writeln!(w, "{}", list.join(" "))
                        .and_then(|_| writeln!(w, "count {}", result.primes.len()))
                        .and_then(|_| w.flush())
                }
                Format::Rows => write_summary(&result, &mut w, SummaryFormat::Rows),
                Format::Structured => write_summary(&result, &mut w, SummaryFormat::Structured),
            };
            written.map_err(|e| Failure::io(out.as_deref(), e))?;
            Ok(0)
        }
        Command::Verify { bound, backend } => {
            let config = SieveConfig::new(bound, backend).with_memory_override(ceiling);
            let report = verify(&config)?;
            println!(
                "bound {} backend {}: {} primes (oracle {})",
                report.max_bound,
                report.backend,
                report.engine_prime_count,
                report.oracle_prime_count
            );
            match report.first_mismatch() {
                None => {
                    println!("SUCCESS");
                    Ok(0)
                }
                Some(m) => {
                    let witness = m
                        .witness
                        .map(|w| {
                            format!(
                                ", witness q={} conjugate {} from ({}, {}) at row {}",
                                w.q, w.conjugate, w.earlier.p, w.earlier.q, w.conjugate_index
                            )
                        })
                        .unwrap_or_default();
                    eprintln!(
                        "Misclassified: {} (sieve prime={}, oracle prime={}{witness}); {} mismatches total",
                        m.n,
                        m.engine_says_prime,
                        m.oracle_says_prime,
                        report.mismatches.len()
                    );
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        Command::Trace {
            bound,
            backend,
            out,
        } => {
            let config = SieveConfig::new(bound, backend)
                .with_trace(true)
                .with_short_circuit(false)
                .with_memory_override(ceiling);
            let result = run(&config)?;
            let w = open_output(out.as_deref())?;
            let rows = write_trace(&result, w).map_err(|e| match e {
                TraceError::Io { .. } => Failure::io(out.as_deref(), e),
                other => Failure {
                    code: EXIT_USAGE,
                    message: other.to_string(),
                },
            })?;
            eprintln!("{rows} rows");
            Ok(0)
        }
        Command::Intersect { bound, json } => {
            let probe = probe_intersection(bound)?;
            if json {
                let text =
                    serde_json::to_string_pretty(&probe).map_err(|e| Failure::io(None, e))?;
                println!("{text}");
            } else {
                let members: Vec<String> =
                    probe.intersection.iter().map(|r| r.to_string()).collect();
                println!("intersection {}", members.join(" "));
                println!("matches_expected {}", probe.matches_expected);
                let extra: Vec<String> =
                    probe.extra_members.iter().map(|r| r.to_string()).collect();
                println!("extra_members {}", extra.join(" "));
            }
            Ok(0)
        }
        Command::Gaps {
            bound,
            backend,
            out,
        } => {
            let config = SieveConfig::new(bound, backend).with_memory_override(ceiling);
            let report = gap_report_with(&config)?;
            let w = open_output(out.as_deref())?;
            write_gap_report(&report, w).map_err(|e| Failure::io(out.as_deref(), e))?;
            Ok(0)
        }
        Command::Bench {
            bounds,
            backends,
            repetitions,
        } => {
            let rows = run_bench(&bounds, &backends, repetitions, ceiling)?;
            write_bench(&rows, io::stdout().lock()).map_err(|e| Failure::io(None, e))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
