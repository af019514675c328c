use proptest::prelude::*;

use kfib_narayana::search::{
    intersect_bruteforce, intersect_with, search_strategies, AllPairs, Merge, SearchStrategy,
};
use kfib_narayana::sequences::{k_fib, narayana};

#[test]
fn strategies_registered() {
    let names = search_strategies().names();
    assert_eq!(names, vec!["all-pairs".to_string(), "merge".to_string()]);
    assert!(search_strategies().get("sieve").is_err());
}

#[test]
fn every_hit_is_exact() {
    for s in intersect_bruteforce(2, 40, 120, 200).unwrap() {
        let f = k_fib(s.k, s.n as i64).unwrap();
        assert_eq!(f, narayana(s.m as i64).unwrap());
        assert_eq!(f, s.value);
    }
}

#[test]
fn chunking_does_not_change_results() {
    let whole = intersect_bruteforce(2, 60, 80, 150).unwrap();
    let mut parts = Vec::new();
    for lo in (2..=60).step_by(7) {
        parts.extend(intersect_bruteforce(lo, (lo + 6).min(60), 80, 150).unwrap());
    }
    parts.sort();
    assert_eq!(whole, parts);
    let mut reversed: Vec<_> = (2..=60u32)
        .rev()
        .flat_map(|k| intersect_bruteforce(k, k, 80, 150).unwrap())
        .collect();
    reversed.sort();
    assert_eq!(whole, reversed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn merge_equals_all_pairs(k_lo in 2u32..30, span in 0u32..6, n_max in 0u64..70, m_max in 0u64..120) {
        let k_hi = k_lo + span;
        let a = intersect_with(&Merge as &dyn SearchStrategy, k_lo, k_hi, n_max, m_max).unwrap();
        let b = intersect_with(&AllPairs as &dyn SearchStrategy, k_lo, k_hi, n_max, m_max).unwrap();
        prop_assert_eq!(a, b);
    }
}
