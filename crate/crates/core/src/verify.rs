//! Cross-checks sieve output against a classical Eratosthenes sieve.
//!
//! The oracle is deliberately independent of the collision engines and is
//! never called by them.

use serde::Serialize;

use crate::sieve::{run, SieveConfig, SieveError, SieveResult, Witness};

/// Primes below `max_bound` by the sieve of Eratosthenes.
pub fn classical_sieve_oracle(max_bound: i64) -> Vec<i64> {
    if max_bound <= 2 {
        return Vec::new();
    }
    let n = max_bound as usize;
    let mut composite = vec![false; n];
    let mut i = 2;
    while i * i < n {
        if !composite[i] {
            for m in (i * i..n).step_by(i) {
                composite[m] = true;
            }
        }
        i += 1;
    }
    (2..n)
        .filter(|&k| !composite[k])
        .map(|k| k as i64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: i64,
    pub engine_says_prime: bool,
    pub oracle_says_prime: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub max_bound: i64,
    pub backend: String,
    pub engine_prime_count: usize,
    pub oracle_prime_count: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn is_success(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }
}

/// Runs the configured engine and compares every `2 <= n < max_bound` with the oracle.
pub fn verify(config: &SieveConfig) -> Result<VerificationReport, SieveError> {
    Ok(check_against_oracle(&run(config)?))
}

/// Compares a finished sieve run with the oracle.
pub fn check_against_oracle(result: &SieveResult) -> VerificationReport {
    let oracle = classical_sieve_oracle(result.max_bound);
    let mut mismatches = Vec::new();
    for n in 2..result.max_bound {
        let engine_says_prime = result.is_prime(n);
        let oracle_says_prime = oracle.binary_search(&n).is_ok();
        if engine_says_prime != oracle_says_prime {
            mismatches.push(Mismatch {
                n,
                engine_says_prime,
                oracle_says_prime,
                witness: result.witnesses.get(&n).copied(),
            });
        }
    }
    VerificationReport {
        max_bound: result.max_bound,
        backend: result.backend.to_string(),
        engine_prime_count: result.primes.len(),
        oracle_prime_count: oracle.len(),
        mismatches,
    }
}
