use proptest::prelude::*;

use moebius_sieve::analysis::check_proportionality;
use moebius_sieve::index::{CollisionIndex, FareyTrie, HashIndex, Occurrence};
use moebius_sieve::sieve::row_count;
use moebius_sieve::{imbalance, make_ratio, moebius, run, Backend, IntPair, SieveConfig};

proptest! {
    #[test]
    fn canonicalization(a in 0i64..10_000, b in 1i64..10_000, k in 1i64..1_000) {
        let r = make_ratio(a, b).unwrap();
        prop_assert_eq!(make_ratio(a * k, b * k).unwrap(), r);
        prop_assert!(r.denom() >= 1);
        prop_assert_eq!(num_gcd(r.numer(), r.denom()), 1);
    }

    #[test]
    fn scale_invariance(x in 1i64..100_000, y in 1i64..100_000, alpha in 1i64..10_000) {
        prop_assert_eq!(imbalance(alpha * x, alpha * y).unwrap(), imbalance(x, y).unwrap());
    }

    #[test]
    fn involution(p in 2i64..1_000_000, q_frac in 0.0f64..1.0) {
        let q = 1 + ((p - 1) as f64 * q_frac) as i64;
        let q = q.min(p - 1);
        let d = imbalance(p, q).unwrap();
        prop_assert_eq!(moebius(moebius(d).unwrap()).unwrap(), d);
    }

    #[test]
    fn proportionality_agrees(x in 1i64..=40, y in 1i64..=40, u in 1i64..=40, v in 1i64..=40) {
        let direct = imbalance(x, y).unwrap() == imbalance(u, v).unwrap();
        prop_assert_eq!(check_proportionality(x, y, u, v).unwrap(), direct);
    }

    #[test]
    fn trie_and_hash_index_agree(keys in prop::collection::vec((0i64..60, 1i64..60), 1..200)) {
        let mut hash = HashIndex::new();
        let mut trie = FareyTrie::new();
        for (row, &(n, d)) in keys.iter().enumerate() {
            let key = make_ratio(n, d).unwrap();
            let at = Occurrence { row, pair: IntPair { p: d, q: n.max(1) } };
            prop_assert_eq!(hash.observe(key, at), trie.observe(key, at));
        }
        prop_assert_eq!(hash.len(), trie.len());
    }

    #[test]
    fn engines_agree(bound in 2i64..400) {
        let baseline = run(&SieveConfig::new(bound, Backend::Baseline).with_trace(true)).unwrap();
        prop_assert_eq!(baseline.records.len(), row_count(bound));
        for backend in [Backend::Hash, Backend::FareyTrie] {
            for sc in [false, true] {
                let res = run(&SieveConfig::new(bound, backend).with_short_circuit(sc)).unwrap();
                prop_assert_eq!(&res.primes, &baseline.primes);
                prop_assert_eq!(&res.witnesses, &baseline.witnesses);
            }
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn result_partitions_the_range() {
    for bound in [2, 3, 50, 777] {
        let res = run(&SieveConfig::new(bound, Backend::Hash)).unwrap();
        assert!(res.primes.windows(2).all(|w| w[0] < w[1]));
        for n in 2..bound {
            assert!(res.is_prime(n) ^ res.witnesses.contains_key(&n), "{n}");
        }
    }
}

#[test]
fn witnesses_are_valid_collisions() {
    let res = run(&SieveConfig::new(1500, Backend::FareyTrie)).unwrap();
    for (&p, w) in &res.witnesses {
        let mine = moebius(imbalance(p, w.q).unwrap()).unwrap();
        let theirs = moebius(imbalance(w.earlier.p, w.earlier.q).unwrap()).unwrap();
        assert_eq!(mine, theirs, "{p}");
        assert!(w.earlier.p < p || (w.earlier.p == p && w.earlier.q < w.q));
        // row numbering is lexicographic
        let expected_row = row_count(w.earlier.p) + (w.earlier.q as usize - 1);
        assert_eq!(w.conjugate_index, expected_row);
    }
}

#[test]
fn gap_report_covers_each_composite_once() {
    let report = moebius_sieve::analysis::gap_report(3000).unwrap();
    let mut seen: Vec<i64> = report
        .gaps
        .iter()
        .flat_map(|g| g.composites.iter().map(|o| o.composite))
        .collect();
    let n = seen.len();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), n);
    let oracle = moebius_sieve::classical_sieve_oracle(3000);
    assert_eq!(n, 2998 - oracle.len());
    for g in &report.gaps {
        for o in &g.composites {
            assert!(o.composite > g.start);
            if let Some(end) = g.end {
                assert!(o.composite < end);
            }
        }
        if let Some(end) = g.end {
            assert_eq!(g.composites.len() as i64, end - g.start - 1);
        }
    }
}

#[test]
fn corollary_never_fires_on_prime_pairs() {
    use moebius_sieve::analysis::{composite_witness, prime_imbalance_set, Verdict};
    let iset = prime_imbalance_set(200).unwrap();
    let primes = moebius_sieve::classical_sieve_oracle(201);
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[..i] {
            assert_eq!(
                composite_witness(p, q, &iset).unwrap(),
                Verdict::NoConclusion
            );
        }
    }
}
