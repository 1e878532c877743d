//! The conjugate-collision sieve.
//!
//! Pairs `(p, q)` are visited in lexicographic order, `p = 2, 3, ..` and
//! `q = 1, .., p - 1`. Each pair contributes the imbalance `δ(p, q)` and its
//! conjugate `μ(δ)`. A number `p` is composite as soon as one of its conjugates
//! has already been produced by a strictly earlier pair; the primes are the `p`
//! whose conjugates are all new.
//!
//! [`run_baseline`] replays the reference procedure row by row and always keeps
//! going to the end of every `p`, so its trace covers every pair. [`run_optimized`]
//! swaps in a pluggable [`CollisionIndex`] and may stop scanning a `p` at its first
//! collision.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::index::{CollisionIndex, FareyTrie, HashIndex, Occurrence};
use crate::ratio::{imbalance, moebius, IntPair, Ratio, RatioError};

/// Bounds above this are refused unless the caller overrides the ceiling.
/// The conjugate index grows like `0.3 * bound^2` entries.
pub const MEMORY_CEILING: i64 = 100_000;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("max_bound must be at least 2, got {0}")]
    InvalidBound(i64),
    #[error("{engine} engine cannot run the {backend} backend")]
    WrongEngine {
        engine: &'static str,
        backend: Backend,
    },
    #[error(
        "max_bound {bound} exceeds the memory ceiling of {ceiling}; \
         pass an explicit override to run anyway"
    )]
    MemoryCeiling { bound: i64, ceiling: i64 },
    #[error("arithmetic failure at (p, q) = ({p}, {q}): {source}")]
    Arithmetic {
        p: i64,
        q: i64,
        #[source]
        source: RatioError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Baseline,
    Hash,
    FareyTrie,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Baseline, Backend::Hash, Backend::FareyTrie];

    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Baseline => "baseline",
            Backend::Hash => "hash",
            Backend::FareyTrie => "farey_trie",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Backend::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| format!("unknown backend `{s}` (expected baseline, hash or farey_trie)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    max_bound: i64,
    backend: Backend,
    short_circuit: bool,
    emit_trace: bool,
    override_memory_ceiling: bool,
}

impl SieveConfig {
    /// Sieves `2 <= p < max_bound`. Optimized backends short-circuit by default;
    /// no trace is kept.
    pub fn new(max_bound: i64, backend: Backend) -> Self {
        SieveConfig {
            max_bound,
            backend,
            short_circuit: backend != Backend::Baseline,
            emit_trace: false,
            override_memory_ceiling: false,
        }
    }

    pub fn with_short_circuit(mut self, on: bool) -> Self {
        self.short_circuit = on;
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.emit_trace = on;
        self
    }

    pub fn with_memory_override(mut self, on: bool) -> Self {
        self.override_memory_ceiling = on;
        self
    }

    pub fn max_bound(&self) -> i64 {
        self.max_bound
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Always false for the baseline backend, whose trace needs every row.
    pub fn short_circuit(&self) -> bool {
        self.short_circuit && self.backend != Backend::Baseline
    }

    pub fn emit_trace(&self) -> bool {
        self.emit_trace
    }

    /// Whether the run will produce a complete trace.
    pub fn traced(&self) -> bool {
        self.emit_trace && !self.short_circuit()
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        if self.max_bound < 2 {
            return Err(SieveError::InvalidBound(self.max_bound));
        }
        if self.max_bound > MEMORY_CEILING && !self.override_memory_ceiling {
            return Err(SieveError::MemoryCeiling {
                bound: self.max_bound,
                ceiling: MEMORY_CEILING,
            });
        }
        Ok(())
    }
}

/// An earlier row referenced by a collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BackRef {
    pub row: usize,
    pub pair: IntPair,
}

impl From<Occurrence> for BackRef {
    fn from(o: Occurrence) -> Self {
        BackRef {
            row: o.row,
            pair: o.pair,
        }
    }
}

/// One visited pair with the first earlier rows sharing its imbalance and its
/// conjugate, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub row_index: usize,
    pub pair: IntPair,
    pub imbalance: Ratio,
    pub conjugate: Ratio,
    pub imbalance_ref: Option<BackRef>,
    pub conjugate_ref: Option<BackRef>,
}

/// The first collision that marked a number composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub q: i64,
    pub conjugate: Ratio,
    pub conjugate_index: usize,
    pub earlier: IntPair,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SieveStats {
    /// Pairs actually evaluated (less than the full row count when short-circuiting).
    pub rows_examined: usize,
    pub distinct_conjugates: usize,
    /// Structural size of the conjugate index (trie nodes; equals
    /// `distinct_conjugates` for flat maps).
    pub index_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct SieveResult {
    pub max_bound: i64,
    pub backend: Backend,
    pub primes: Vec<i64>,
    /// Empty unless the run was configured to trace and did not short-circuit.
    pub records: Vec<PairRecord>,
    pub traced: bool,
    pub witnesses: BTreeMap<i64, Witness>,
    pub stats: SieveStats,
}

impl SieveResult {
    pub fn is_prime(&self, n: i64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Total number of pairs visited for `2 <= p < max_bound`.
pub fn row_count(max_bound: i64) -> usize {
    if max_bound < 3 {
        return 0;
    }
    let n = max_bound as usize;
    (n - 1) * (n - 2) / 2
}

/// Dispatches on the configured backend.
pub fn run(config: &SieveConfig) -> Result<SieveResult, SieveError> {
    match config.backend {
        Backend::Baseline => run_baseline(config),
        Backend::Hash | Backend::FareyTrie => run_optimized(config),
    }
}

fn conjugate_pair(p: i64, q: i64) -> Result<(Ratio, Ratio), SieveError> {
    let wrap = |source| SieveError::Arithmetic { p, q, source };
    let delta = imbalance(p, q).map_err(wrap)?;
    let mu = moebius(delta).map_err(wrap)?;
    Ok((delta, mu))
}

/// Row-by-row replay of the reference procedure.
///
/// Every pair is appended, including those after `p` is already known to be
/// composite. Imbalance collisions are tracked for the trace but only conjugate
/// collisions decide primality.
pub fn run_baseline(config: &SieveConfig) -> Result<SieveResult, SieveError> {
    if config.backend != Backend::Baseline {
        return Err(SieveError::WrongEngine {
            engine: "baseline",
            backend: config.backend,
        });
    }
    config.validate()?;

    // the reference keeps parallel columns and resolves a hit to its first
    // position in the column; these maps hold that position directly
    let mut ps_qs: Vec<IntPair> = Vec::new();
    let mut first_imbalance: HashMap<Ratio, usize> = HashMap::new();
    let mut first_conjugate: HashMap<Ratio, usize> = HashMap::new();

    let mut primes = Vec::new();
    let mut records = Vec::new();
    let mut witnesses = BTreeMap::new();

    for p in 2..config.max_bound {
        let mut p_prime = true;
        for q in 1..p {
            let row = ps_qs.len();
            let (delta, mu) = conjugate_pair(p, q)?;
            let imbalance_ref = first_imbalance.get(&delta).map(|&i| BackRef {
                row: i,
                pair: ps_qs[i],
            });
            let conjugate_ref = first_conjugate.get(&mu).map(|&i| BackRef {
                row: i,
                pair: ps_qs[i],
            });
            if let Some(hit) = conjugate_ref {
                if p_prime {
                    witnesses.insert(
                        p,
                        Witness {
                            q,
                            conjugate: mu,
                            conjugate_index: hit.row,
                            earlier: hit.pair,
                        },
                    );
                }
                p_prime = false;
            }
            let pair = IntPair { p, q };
            ps_qs.push(pair);
            first_imbalance.entry(delta).or_insert(row);
            first_conjugate.entry(mu).or_insert(row);
            if config.emit_trace {
                records.push(PairRecord {
                    row_index: row,
                    pair,
                    imbalance: delta,
                    conjugate: mu,
                    imbalance_ref,
                    conjugate_ref,
                });
            }
        }
        if p_prime {
            primes.push(p);
        }
    }

    Ok(SieveResult {
        max_bound: config.max_bound,
        backend: Backend::Baseline,
        primes,
        records,
        traced: config.emit_trace,
        witnesses,
        stats: SieveStats {
            rows_examined: ps_qs.len(),
            distinct_conjugates: first_conjugate.len(),
            index_nodes: first_conjugate.len(),
        },
    })
}

/// Sieve over an index-backed conjugate store.
pub fn run_optimized(config: &SieveConfig) -> Result<SieveResult, SieveError> {
    match config.backend {
        Backend::Hash => sieve_with::<HashIndex>(config),
        Backend::FareyTrie => sieve_with::<FareyTrie>(config),
        Backend::Baseline => Err(SieveError::WrongEngine {
            engine: "optimized",
            backend: config.backend,
        }),
    }
}

/// Generic engine over any [`CollisionIndex`].
///
/// Row indices follow the full lexicographic numbering even when rows are
/// skipped, so witnesses agree with the baseline engine.
pub fn sieve_with<I: CollisionIndex + Default>(
    config: &SieveConfig,
) -> Result<SieveResult, SieveError> {
    config.validate()?;
    let short_circuit = config.short_circuit();
    let traced = config.traced();

    let mut conjugates = I::default();
    let mut imbalances = traced.then(I::default);

    let mut primes = Vec::new();
    let mut records = Vec::new();
    let mut witnesses = BTreeMap::new();
    let mut row = 0usize;
    let mut examined = 0usize;

    for p in 2..config.max_bound {
        let mut p_prime = true;
        for q in 1..p {
            let (delta, mu) = conjugate_pair(p, q)?;
            examined += 1;
            let here = Occurrence {
                row,
                pair: IntPair { p, q },
            };
            let conjugate_hit = conjugates.observe(mu, here);
            if let Some(hit) = conjugate_hit {
                if p_prime {
                    witnesses.insert(
                        p,
                        Witness {
                            q,
                            conjugate: mu,
                            conjugate_index: hit.row,
                            earlier: hit.pair,
                        },
                    );
                }
                p_prime = false;
            }
            if let Some(imbalances) = imbalances.as_mut() {
                let imbalance_hit = imbalances.observe(delta, here);
                records.push(PairRecord {
                    row_index: row,
                    pair: here.pair,
                    imbalance: delta,
                    conjugate: mu,
                    imbalance_ref: imbalance_hit.map(BackRef::from),
                    conjugate_ref: conjugate_hit.map(BackRef::from),
                });
            }
            row += 1;
            if short_circuit && !p_prime {
                row += (p - 1 - q) as usize;
                break;
            }
        }
        if p_prime {
            primes.push(p);
        }
    }

    Ok(SieveResult {
        max_bound: config.max_bound,
        backend: config.backend,
        primes,
        records,
        traced,
        witnesses,
        stats: SieveStats {
            rows_examined: examined,
            distinct_conjugates: conjugates.len(),
            index_nodes: conjugates.node_count(),
        },
    })
}
