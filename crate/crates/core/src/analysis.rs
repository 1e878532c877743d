//! Checks of the structural claims around the sieve: the prime imbalance set
//! and its conjugate intersection, the composite-witness filter, the semiprime
//! triangle, proportionality, and per-gap obstruction reports.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::ratio::{imbalance, moebius, IntPair, Ratio, RatioError};
use crate::sieve::{run, Backend, SieveConfig, SieveError};
use crate::verify::classical_sieve_oracle;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("bound must be at least {min}, got {got}")]
    BoundTooSmall { min: i64, got: i64 },
    #[error("expected p > q >= 1, got ({p}, {q})")]
    NotOrdered { p: i64, q: i64 },
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("arguments must be positive")]
    NonPositive,
    #[error(
        "imbalance equality ({ratios_equal}) disagrees with cross-product proportionality \
         ({proportional}) for ({x}, {y}) vs ({u}, {v})"
    )]
    InjectivityViolated {
        x: i64,
        y: i64,
        u: i64,
        v: i64,
        ratios_equal: bool,
        proportional: bool,
    },
    #[error(transparent)]
    Ratio(#[from] RatioError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// The two mutually conjugate prime imbalances, `δ(7,3)` and `δ(5,2)`.
pub const CONJUGATE_PAIR: [Ratio; 2] = [Ratio::from_reduced(2, 5), Ratio::from_reduced(3, 7)];

pub fn expected_intersection() -> BTreeSet<Ratio> {
    CONJUGATE_PAIR.into_iter().collect()
}

/// Imbalances of ordered prime pairs `p > q` with `p <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImbalanceSet {
    pub bound: i64,
    pub values: BTreeSet<Ratio>,
}

impl ImbalanceSet {
    pub fn contains(&self, x: &Ratio) -> bool {
        self.values.contains(x)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn prime_imbalance_set(bound: i64) -> Result<ImbalanceSet, AnalysisError> {
    if bound < 3 {
        return Err(AnalysisError::BoundTooSmall { min: 3, got: bound });
    }
    let primes = classical_sieve_oracle(bound + 1);
    let mut values = BTreeSet::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[..i] {
            values.insert(imbalance(p, q)?);
        }
    }
    Ok(ImbalanceSet { bound, values })
}

/// `I ∩ μ(I)` for the prime imbalance set at `bound`.
pub fn conjugate_intersection(bound: i64) -> Result<BTreeSet<Ratio>, AnalysisError> {
    let iset = prime_imbalance_set(bound)?;
    intersection_of(&iset)
}

fn intersection_of(iset: &ImbalanceSet) -> Result<BTreeSet<Ratio>, AnalysisError> {
    let mut out = BTreeSet::new();
    for x in &iset.values {
        let image = moebius(*x)?;
        if iset.contains(&image) {
            out.insert(image);
        }
    }
    Ok(out)
}

/// Result of scanning the intersection above the established range.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionProbe {
    pub bound: i64,
    pub intersection: Vec<Ratio>,
    pub matches_expected: bool,
    /// Members other than 2/5 and 3/7.
    pub extra_members: Vec<Ratio>,
}

pub fn probe_intersection(bound: i64) -> Result<IntersectionProbe, AnalysisError> {
    let found = conjugate_intersection(bound)?;
    let expected = expected_intersection();
    Ok(IntersectionProbe {
        bound,
        matches_expected: found == expected,
        extra_members: found.difference(&expected).copied().collect(),
        intersection: found.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The conjugate lands in the prime imbalance set outside the known pair,
    /// so `p` and `q` cannot both be prime.
    CompositeWitnessed,
    NoConclusion,
}

/// One-way filter: never claims primality.
pub fn composite_witness(p: i64, q: i64, iset: &ImbalanceSet) -> Result<Verdict, AnalysisError> {
    if !(p > q && q >= 1) {
        return Err(AnalysisError::NotOrdered { p, q });
    }
    let mu = moebius(imbalance(p, q)?)?;
    if iset.contains(&mu) && !CONJUGATE_PAIR.contains(&mu) {
        Ok(Verdict::CompositeWitnessed)
    } else {
        Ok(Verdict::NoConclusion)
    }
}

/// Checks `δ(pq, q²) = δ(p², pq) = δ(p, q)` for primes `p > q`.
pub fn semiprime_triangle(p: i64, q: i64) -> Result<bool, AnalysisError> {
    if !(p > q && q >= 1) {
        return Err(AnalysisError::NotOrdered { p, q });
    }
    let primes = classical_sieve_oracle(p + 1);
    for n in [p, q] {
        if primes.binary_search(&n).is_err() {
            return Err(AnalysisError::NotPrime(n));
        }
    }
    let overflow = || AnalysisError::Ratio(RatioError::Overflow("semiprime product"));
    let pq = p.checked_mul(q).ok_or_else(overflow)?;
    let qq = q.checked_mul(q).ok_or_else(overflow)?;
    let pp = p.checked_mul(p).ok_or_else(overflow)?;
    let base = imbalance(p, q)?;
    Ok(imbalance(pq, qq)? == base && imbalance(pp, pq)? == base)
}

/// Whether `δ(x, y) = δ(u, v)`, cross-checked against proportionality of the
/// pairs once each is put larger-first (`x·v = y·u` when `x > y`, `u > v`).
///
/// An `Err(InjectivityViolated)` means the two routes disagree.
pub fn check_proportionality(x: i64, y: i64, u: i64, v: i64) -> Result<bool, AnalysisError> {
    if x < 1 || y < 1 || u < 1 || v < 1 {
        return Err(AnalysisError::NonPositive);
    }
    let ratios_equal = imbalance(x, y)? == imbalance(u, v)?;
    let (a, b) = (x.max(y) as i128, x.min(y) as i128);
    let (c, d) = (u.max(v) as i128, u.min(v) as i128);
    let proportional = a * d == b * c;
    if ratios_equal != proportional {
        return Err(AnalysisError::InjectivityViolated {
            x,
            y,
            u,
            v,
            ratios_equal,
            proportional,
        });
    }
    Ok(ratios_equal)
}

/// A composite together with the earlier pair whose conjugate it repeated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub composite: i64,
    pub q: i64,
    pub conjugate: Ratio,
    pub witness_row: usize,
    pub witness: IntPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub start: i64,
    /// Next prime after `start`, or `None` when it lies at or beyond the bound.
    pub end: Option<i64>,
    pub composites: Vec<Obstruction>,
}

impl Gap {
    pub fn length(&self) -> Option<i64> {
        self.end.map(|e| e - self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub max_bound: i64,
    pub gaps: Vec<Gap>,
}

impl GapReport {
    pub fn composite_count(&self) -> usize {
        self.gaps.iter().map(|g| g.composites.len()).sum()
    }
}

/// Groups the sieve's composites by the prime gap they fall in, each with the
/// first conjugate collision that excluded it.
pub fn gap_report(max_bound: i64) -> Result<GapReport, AnalysisError> {
    gap_report_with(&SieveConfig::new(max_bound, Backend::Hash))
}

pub fn gap_report_with(config: &SieveConfig) -> Result<GapReport, AnalysisError> {
    if config.max_bound() < 5 {
        return Err(AnalysisError::BoundTooSmall {
            min: 5,
            got: config.max_bound(),
        });
    }
    let result = run(config)?;
    let mut gaps: Vec<Gap> = Vec::new();
    for n in 2..config.max_bound() {
        if result.is_prime(n) {
            if let Some(last) = gaps.last_mut() {
                last.end = Some(n);
            }
            gaps.push(Gap {
                start: n,
                end: None,
                composites: Vec::new(),
            });
        } else if let Some(w) = result.witnesses.get(&n) {
            // 2 is always the first prime, so a gap is open here
            let gap = gaps.last_mut().expect("composite before the first prime");
            gap.composites.push(Obstruction {
                composite: n,
                q: w.q,
                conjugate: w.conjugate,
                witness_row: w.conjugate_index,
                witness: w.earlier,
            });
        }
    }
    Ok(GapReport {
        max_bound: config.max_bound(),
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::make_ratio;

    fn ratio(n: i64, d: i64) -> Ratio {
        make_ratio(n, d).unwrap()
    }

    #[test]
    fn imbalance_set_small() {
        let s = prime_imbalance_set(3).unwrap();
        assert_eq!(s.values, [ratio(1, 5)].into_iter().collect());
        let s = prime_imbalance_set(7).unwrap();
        assert!(s.contains(&ratio(2, 5)));
        assert!(s.contains(&ratio(3, 7)));
        assert!(matches!(
            prime_imbalance_set(2),
            Err(AnalysisError::BoundTooSmall { min: 3, got: 2 })
        ));
    }

    #[test]
    fn imbalance_set_size_matches_double_loop() {
        // independent oracle: trial-division primes, raw cross-multiplied dedup
        let is_prime = |n: i64| n >= 2 && (2..n).all(|d| n % d != 0);
        let primes: Vec<i64> = (2..=100).filter(|&n| is_prime(n)).collect();
        let mut seen: Vec<(i64, i64)> = Vec::new();
        for &p in &primes {
            for &q in &primes {
                if p > q {
                    let (a, b) = (p - q, p + q);
                    if !seen.iter().any(|&(c, d)| a * d == b * c) {
                        seen.push((a, b));
                    }
                }
            }
        }
        assert_eq!(prime_imbalance_set(100).unwrap().len(), seen.len());
    }

    #[test]
    fn intersection_values() {
        assert_eq!(
            conjugate_intersection(200).unwrap(),
            expected_intersection()
        );
        assert_eq!(conjugate_intersection(7).unwrap(), expected_intersection());
        assert!(conjugate_intersection(3).unwrap().is_empty());
        assert!(conjugate_intersection(5).unwrap().is_empty());
    }

    #[test]
    fn composite_witness_verdicts() {
        let iset = prime_imbalance_set(200).unwrap();
        assert_eq!(
            composite_witness(7, 3, &iset).unwrap(),
            Verdict::NoConclusion
        );
        // μ(δ(9,3)) = 1/3 and μ(δ(4,2)) = 1/2; decided by set membership
        let third = iset.contains(&ratio(1, 3));
        let half = iset.contains(&ratio(1, 2));
        let expect = |member| {
            if member {
                Verdict::CompositeWitnessed
            } else {
                Verdict::NoConclusion
            }
        };
        assert_eq!(composite_witness(9, 3, &iset).unwrap(), expect(third));
        assert_eq!(composite_witness(4, 2, &iset).unwrap(), expect(half));
        // μ(δ(8,2)) = 1/4 = δ(5,3)
        assert_eq!(
            composite_witness(8, 2, &iset).unwrap(),
            Verdict::CompositeWitnessed
        );
        assert!(composite_witness(3, 3, &iset).is_err());
    }

    #[test]
    fn semiprime_triangle_cases() {
        assert!(semiprime_triangle(7, 3).unwrap());
        assert!(semiprime_triangle(3, 2).unwrap());
        assert!(matches!(
            semiprime_triangle(5, 5),
            Err(AnalysisError::NotOrdered { .. })
        ));
        assert!(matches!(
            semiprime_triangle(9, 2),
            Err(AnalysisError::NotPrime(9))
        ));
    }

    #[test]
    fn proportionality_cases() {
        assert!(check_proportionality(55, 25, 11, 5).unwrap());
        assert!(!check_proportionality(7, 3, 5, 2).unwrap());
        assert!(check_proportionality(6, 2, 3, 1).unwrap());
        // mixed orientation
        assert!(check_proportionality(2, 6, 3, 1).unwrap());
        assert!(check_proportionality(4, 4, 9, 9).unwrap());
        assert!(!check_proportionality(4, 4, 9, 8).unwrap());
        assert!(check_proportionality(0, 1, 1, 1).is_err());
    }

    #[test]
    fn gap_report_small() {
        let report = gap_report(12).unwrap();
        let gap = report.gaps.iter().find(|g| g.start == 7).unwrap();
        assert_eq!(gap.end, Some(11));
        let ns: Vec<i64> = gap.composites.iter().map(|o| o.composite).collect();
        assert_eq!(ns, vec![8, 9, 10]);

        let report = gap_report(6).unwrap();
        let gap = report.gaps.iter().find(|g| g.start == 3).unwrap();
        assert_eq!(gap.end, Some(5));
        let four = gap.composites[0];
        assert_eq!((four.composite, four.q), (4, 2));
        assert_eq!(four.witness, IntPair { p: 2, q: 1 });

        let report = gap_report(5).unwrap();
        assert!(!report.gaps.is_empty());
        assert_eq!(report.composite_count(), 1);
        assert_eq!(report.gaps.last().unwrap().end, None);
        assert!(gap_report(4).is_err());
    }
}
