//! A prime sieve that never divides: a number `p` is prime exactly when none of
//! the Moebius-conjugated imbalances `μ(δ(p, q))`, `1 <= q < p`, repeats a value
//! produced by an earlier pair.
//!
//! - [`ratio`]: reduced fractions, `δ` and `μ`
//! - [`index`]: first-occurrence collision indices (hash map, Stern–Brocot trie)
//! - [`sieve`]: the baseline and optimized engines
//! - [`verify`]: Eratosthenes oracle and verification reports
//! - [`analysis`]: prime imbalance sets, conjugate intersection, gap reports
//! - [`trace_io`]: trace CSV, summaries, golden comparison
//! - [`bench`]: backend timing

pub mod analysis;
pub mod bench;
pub mod index;
pub mod ratio;
pub mod sieve;
pub mod trace_io;
pub mod verify;

pub use ratio::{imbalance, imbalance_float, make_ratio, moebius, IntPair, Ratio, RatioError};
pub use sieve::{
    run, run_baseline, run_optimized, Backend, PairRecord, SieveConfig, SieveError, SieveResult,
    Witness,
};
pub use verify::{classical_sieve_oracle, verify, VerificationReport};
