//! Trace CSV, run summaries, gap tables, and golden-file comparison.
//!
//! The trace layout is fixed: an unnamed leading row-index column (column 0)
//! followed by twelve named columns, one data row per visited pair. Missing
//! back-references are written as `-1`. The header keeps the historical
//! spelling `seen_conjugate_dems` so files compare byte-for-byte with traces
//! produced by the original reference script.

use std::io::{self, BufRead, Write};

use serde::Serialize;
use thiserror::Error;

use crate::analysis::GapReport;
use crate::ratio::{make_ratio, IntPair};
use crate::sieve::{BackRef, PairRecord, SieveResult};

/// Column names after the leading unnamed index column.
pub const TRACE_COLUMNS: [&str; 12] = [
    "seen_imbalance_nums",
    "seen_imbalance_dens",
    "seen_conjugate_nums",
    "seen_conjugate_dems",
    "ps",
    "qs",
    "imbalance_indices",
    "imbalance_ps",
    "imbalance_qs",
    "conjugate_indices",
    "conjugate_ps",
    "conjugate_qs",
];

pub fn trace_header() -> String {
    format!(",{}", TRACE_COLUMNS.join(","))
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("write failed after {rows_written} data rows: {source}")]
    Io {
        rows_written: usize,
        #[source]
        source: io::Error,
    },
    #[error("read failed: {0}")]
    Read(#[source] io::Error),
    #[error("result carries no trace; run with tracing on and short-circuiting off")]
    MissingTrace,
    #[error("malformed header: column {column} is `{found}`, expected `{expected}`")]
    Header {
        column: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn write_err(rows_written: usize) -> impl FnOnce(io::Error) -> TraceError {
    move |source| TraceError::Io {
        rows_written,
        source,
    }
}

fn split_ref(r: Option<BackRef>) -> [i64; 3] {
    match r {
        Some(b) => [b.row as i64, b.pair.p, b.pair.q],
        None => [-1, -1, -1],
    }
}

/// Writes the header and one row per record; returns the number of data rows.
pub fn write_trace<W: Write>(result: &SieveResult, mut out: W) -> Result<usize, TraceError> {
    if !result.traced {
        return Err(TraceError::MissingTrace);
    }
    writeln!(out, "{}", trace_header()).map_err(write_err(0))?;
    for (written, rec) in result.records.iter().enumerate() {
        let [ii, ip, iq] = split_ref(rec.imbalance_ref);
        let [ci, cp, cq] = split_ref(rec.conjugate_ref);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            rec.row_index,
            rec.imbalance.numer(),
            rec.imbalance.denom(),
            rec.conjugate.numer(),
            rec.conjugate.denom(),
            rec.pair.p,
            rec.pair.q,
            ii,
            ip,
            iq,
            ci,
            cp,
            cq
        )
        .map_err(write_err(written))?;
    }
    out.flush().map_err(write_err(result.records.len()))?;
    Ok(result.records.len())
}

fn check_header(line: &str) -> Result<(), TraceError> {
    let found: Vec<&str> = line.split(',').collect();
    let expected: Vec<&str> = std::iter::once("").chain(TRACE_COLUMNS).collect();
    for column in 0..found.len().max(expected.len()) {
        let f = found.get(column).copied();
        let e = expected.get(column).copied();
        if f != e {
            return Err(TraceError::Header {
                column,
                expected: e.unwrap_or("<end of header>").to_string(),
                found: f.unwrap_or("<missing>").to_string(),
            });
        }
    }
    Ok(())
}

fn normalized_lines<R: BufRead>(input: R) -> impl Iterator<Item = Result<String, TraceError>> {
    input.lines().map(|l| {
        l.map(|mut s| {
            if s.ends_with('\r') {
                s.pop();
            }
            s
        })
        .map_err(TraceError::Read)
    })
}

/// Parses a trace back into records.
pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<PairRecord>, TraceError> {
    let mut lines = normalized_lines(input);
    let header = lines.next().transpose()?.unwrap_or_default();
    check_header(&header)?;
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let bad = |message: String| TraceError::Parse {
            line: line_no,
            message,
        };
        let fields = line
            .split(',')
            .map(|f| f.parse::<i64>().map_err(|e| bad(format!("`{f}`: {e}"))))
            .collect::<Result<Vec<i64>, _>>()?;
        if fields.len() != 13 {
            return Err(bad(format!("expected 13 fields, found {}", fields.len())));
        }
        let back_ref = |idx: i64, p: i64, q: i64| -> Result<Option<BackRef>, TraceError> {
            match (idx, p, q) {
                (-1, -1, -1) => Ok(None),
                (i, p, q) if i >= 0 && p >= 1 && q >= 1 => Ok(Some(BackRef {
                    row: i as usize,
                    pair: IntPair { p, q },
                })),
                _ => Err(bad(format!(
                    "inconsistent back-reference ({idx}, {p}, {q})"
                ))),
            }
        };
        let ratio = |n, d| make_ratio(n, d).map_err(|e| bad(e.to_string()));
        if fields[0] < 0 {
            return Err(bad("negative row index".into()));
        }
        records.push(PairRecord {
            row_index: fields[0] as usize,
            imbalance: ratio(fields[1], fields[2])?,
            conjugate: ratio(fields[3], fields[4])?,
            pair: IntPair {
                p: fields[5],
                q: fields[6],
            },
            imbalance_ref: back_ref(fields[7], fields[8], fields[9])?,
            conjugate_ref: back_ref(fields[10], fields[11], fields[12])?,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceComparison {
    Equal,
    /// First differing line (1-based, header is line 1) and field (0-based,
    /// the unnamed index column is 0). A side that ran out of lines is `None`.
    Diverges {
        line: usize,
        column: usize,
        produced: Option<String>,
        golden: Option<String>,
    },
}

/// Line-by-line comparison after stripping `\r`. Both headers must match the
/// trace schema.
pub fn compare_trace<A: BufRead, B: BufRead>(
    produced: A,
    golden: B,
) -> Result<TraceComparison, TraceError> {
    let mut produced = normalized_lines(produced);
    let mut golden = normalized_lines(golden);
    let mut line = 0;
    loop {
        line += 1;
        let a = produced.next().transpose()?;
        let b = golden.next().transpose()?;
        if line == 1 {
            check_header(a.as_deref().unwrap_or(""))?;
            check_header(b.as_deref().unwrap_or(""))?;
        }
        match (a, b) {
            (None, None) => return Ok(TraceComparison::Equal),
            (Some(x), Some(y)) if x == y => continue,
            (a, b) => {
                let column = match (&a, &b) {
                    (Some(x), Some(y)) => x
                        .split(',')
                        .zip(y.split(','))
                        .position(|(f, g)| f != g)
                        .unwrap_or_else(|| x.split(',').count().min(y.split(',').count())),
                    _ => 0,
                };
                return Ok(TraceComparison::Diverges {
                    line,
                    column,
                    produced: a,
                    golden: b,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryFormat {
    /// Tagged CSV-like rows: `prime,<n>`, `witness,...`, `prime_count,<n>`.
    Rows,
    /// JSON object, see [`Summary`].
    Structured,
}

#[derive(Debug, Serialize)]
pub struct WitnessRow {
    pub composite: i64,
    pub q: i64,
    pub conjugate: String,
    pub conjugate_index: usize,
    pub witness_p: i64,
    pub witness_q: i64,
}

/// Stable keys of the structured summary.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub max_bound: i64,
    pub backend: String,
    pub prime_count: usize,
    pub composite_count: usize,
    pub primes: Vec<i64>,
    pub witnesses: Vec<WitnessRow>,
    pub rows_examined: usize,
    pub distinct_conjugates: usize,
}

impl Summary {
    pub fn from_result(result: &SieveResult) -> Self {
        Summary {
            max_bound: result.max_bound,
            backend: result.backend.to_string(),
            prime_count: result.primes.len(),
            composite_count: result.witnesses.len(),
            primes: result.primes.clone(),
            witnesses: result
                .witnesses
                .iter()
                .map(|(&composite, w)| WitnessRow {
                    composite,
                    q: w.q,
                    conjugate: w.conjugate.to_string(),
                    conjugate_index: w.conjugate_index,
                    witness_p: w.earlier.p,
                    witness_q: w.earlier.q,
                })
                .collect(),
            rows_examined: result.stats.rows_examined,
            distinct_conjugates: result.stats.distinct_conjugates,
        }
    }
}

pub fn write_summary<W: Write>(
    result: &SieveResult,
    mut out: W,
    format: SummaryFormat,
) -> io::Result<()> {
    let summary = Summary::from_result(result);
    match format {
        SummaryFormat::Structured => {
            serde_json::to_writer_pretty(&mut out, &summary)?;
            writeln!(out)?;
        }
        SummaryFormat::Rows => {
            writeln!(out, "max_bound,{}", summary.max_bound)?;
            writeln!(out, "backend,{}", summary.backend)?;
            for p in &summary.primes {
                writeln!(out, "prime,{p}")?;
            }
            for w in &summary.witnesses {
                writeln!(
                    out,
                    "witness,{},{},{},{},{},{}",
                    w.composite, w.q, w.conjugate, w.conjugate_index, w.witness_p, w.witness_q
                )?;
            }
            writeln!(out, "prime_count,{}", summary.prime_count)?;
            writeln!(out, "composite_count,{}", summary.composite_count)?;
        }
    }
    out.flush()
}

pub const GAP_COLUMNS: [&str; 11] = [
    "gap_start",
    "gap_end",
    "gap_length",
    "composite",
    "q",
    "conjugate_num",
    "conjugate_den",
    "witness_row",
    "witness_p",
    "witness_q",
    "composites_in_gap",
];

/// One row per composite; gaps without composites get a single row with the
/// composite fields left empty. An open final gap has empty `gap_end` and
/// `gap_length`.
pub fn write_gap_report<W: Write>(report: &GapReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", GAP_COLUMNS.join(","))?;
    for gap in &report.gaps {
        let end = gap.end.map(|e| e.to_string()).unwrap_or_default();
        let len = gap.length().map(|l| l.to_string()).unwrap_or_default();
        let n = gap.composites.len();
        if gap.composites.is_empty() {
            writeln!(out, "{},{end},{len},,,,,,,,0", gap.start)?;
        }
        for o in &gap.composites {
            writeln!(
                out,
                "{},{end},{len},{},{},{},{},{},{},{},{n}",
                gap.start,
                o.composite,
                o.q,
                o.conjugate.numer(),
                o.conjugate.denom(),
                o.witness_row,
                o.witness.p,
                o.witness.q
            )?;
        }
    }
    out.flush()
}
