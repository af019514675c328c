//! Exhaustive exact search for coincidences `F_n^(k) = N_m` and for powers
//! of two among Narayana's numbers.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::sequences::{k_fib_table, narayana_table, seq_iter, SeqValue, SequenceKind};
use crate::serde_util::biguint_dec;

/// `(n, m)` pairs of the coincidences `F_n^(k) = N_m` that hold for every
/// `k >= 2` because both sequences start `0, 1, 1, (1,) 2`.
pub const TRIVIAL_PAIRS: [(u64, u64); 8] = [
    (0, 0),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 4),
];

pub fn is_trivial(n: u64, m: u64) -> bool {
    TRIVIAL_PAIRS.contains(&(n, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    pub k: u32,
    pub n: u64,
    pub m: u64,
    #[serde(with = "biguint_dec")]
    pub value: SeqValue,
    pub trivial: bool,
}

impl Solution {
    pub fn new(k: u32, n: u64, m: u64, value: SeqValue) -> Self {
        Solution {
            k,
            n,
            m,
            value,
            trivial: is_trivial(n, m),
        }
    }
}

/// One way of intersecting the `k`-Fibonacci table with Narayana's table.
/// Both tables start at index 0.
pub trait SearchStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn intersect(&self, k: u32, fib: &[SeqValue], nar: &[SeqValue]) -> Vec<Solution>;
}

/// Indices `[i, j)` of the run of values equal to `v[i]`.
fn plateau(v: &[SeqValue], i: usize) -> usize {
    let mut j = i + 1;
    while j < v.len() && v[j] == v[i] {
        j += 1;
    }
    j
}

/// Two-pointer merge over the two nondecreasing tables. Runs of equal
/// values (such as `F_1 = F_2` or `N_1 = N_2 = N_3`) are matched as blocks,
/// so every index pair on a shared value is reported.
pub struct Merge;

impl SearchStrategy for Merge {
    fn name(&self) -> &'static str {
        "merge"
    }

    fn intersect(&self, k: u32, fib: &[SeqValue], nar: &[SeqValue]) -> Vec<Solution> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < fib.len() && j < nar.len() {
            match fib[i].cmp(&nar[j]) {
                Ordering::Less => i = plateau(fib, i),
                Ordering::Greater => j = plateau(nar, j),
                Ordering::Equal => {
                    let (ie, je) = (plateau(fib, i), plateau(nar, j));
                    for n in i..ie {
                        for m in j..je {
                            out.push(Solution::new(k, n as u64, m as u64, fib[n].clone()));
                        }
                    }
                    (i, j) = (ie, je);
                }
            }
        }
        out
    }
}

/// Quadratic comparison of every pair; the oracle for [`Merge`].
pub struct AllPairs;

impl SearchStrategy for AllPairs {
    fn name(&self) -> &'static str {
        "all-pairs"
    }

    fn intersect(&self, k: u32, fib: &[SeqValue], nar: &[SeqValue]) -> Vec<Solution> {
        let mut out = Vec::new();
        for (n, f) in fib.iter().enumerate() {
            for (m, v) in nar.iter().enumerate() {
                if f == v {
                    out.push(Solution::new(k, n as u64, m as u64, f.clone()));
                }
            }
        }
        out
    }
}

pub fn search_strategies() -> &'static Registry<dyn SearchStrategy> {
    static REG: OnceLock<Registry<dyn SearchStrategy>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn SearchStrategy> = Registry::new("search strategy");
        for s in [Arc::new(Merge) as Arc<dyn SearchStrategy>, Arc::new(AllPairs)] {
            r.register(s.name(), s);
        }
        r
    })
}

/// Every `(k, n, m)` with `k_lo <= k <= k_hi`, `0 <= n <= n_max`,
/// `0 <= m <= m_max` and `F_n^(k) = N_m`, sorted.
pub fn intersect_bruteforce(k_lo: u32, k_hi: u32, n_max: u64, m_max: u64) -> Result<Vec<Solution>> {
    intersect_with(&Merge, k_lo, k_hi, n_max, m_max)
}

pub fn intersect_with(
    strategy: &dyn SearchStrategy,
    k_lo: u32,
    k_hi: u32,
    n_max: u64,
    m_max: u64,
) -> Result<Vec<Solution>> {
    if k_lo < 2 || k_lo > k_hi {
        return Err(Error::Precondition(format!(
            "need 2 <= k_lo <= k_hi, got {k_lo}..{k_hi}"
        )));
    }
    let nar = narayana_table(m_max as usize);
    let per_k: Result<Vec<Vec<Solution>>> = (k_lo..=k_hi)
        .into_par_iter()
        .map(|k| Ok(strategy.intersect(k, &k_fib_table(k, n_max as usize)?, &nar)))
        .collect();
    let mut out: Vec<Solution> = per_k?.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// `(m, l)` with `N_m = 2^l` for `m <= m_max`. The three `N_m = 1` entries
/// are only reported when `include_ones` is set.
pub fn narayana_powers_of_two(m_max: u64, include_ones: bool) -> Vec<(u64, u64)> {
    seq_iter(SequenceKind::Narayana, 0)
        .expect("index 0 is valid")
        .take(m_max as usize + 1)
        .filter_map(|(m, v)| {
            if v.count_ones() != 1 || (v.is_one() && !include_ones) {
                return None;
            }
            Some((m as u64, v.bits() - 1))
        })
        .collect()
}

/// Search box for the theorem-level check: `2 <= k <= k_max`,
/// `4 <= n <= n_max`, `5 <= m <= m_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub k_max: u32,
    pub n_max: u64,
    pub m_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub caps: SearchCaps,
    pub found: Vec<Solution>,
    pub missing: Vec<(u32, u64, u64)>,
    pub extra: Vec<Solution>,
    pub pass: bool,
}

/// The nontrivial solutions expected inside `caps`.
pub fn expected_solutions(caps: &SearchCaps) -> BTreeSet<(u32, u64, u64)> {
    let mut want = BTreeSet::new();
    let mut add = |k: u32, n: u64, m: u64| {
        if k >= 2 && k <= caps.k_max && n >= 4 && n <= caps.n_max && m >= 5 && m <= caps.m_max {
            want.insert((k, n, m));
        }
    };
    add(2, 4, 5);
    add(3, 6, 9);
    for k in 3..=caps.k_max {
        add(k, 4, 6);
    }
    want
}

/// Compares a list of solutions against the expected set inside `caps`.
/// Entries outside the box or flagged trivial are ignored.
pub fn check_theorem2(caps: SearchCaps, solutions: &[Solution]) -> Theorem2Report {
    let found: Vec<Solution> = solutions
        .iter()
        .filter(|s| !s.trivial && s.k <= caps.k_max && s.n >= 4 && s.m >= 5 && s.n <= caps.n_max && s.m <= caps.m_max)
        .cloned()
        .collect();
    let want = expected_solutions(&caps);
    let got: BTreeSet<_> = found.iter().map(|s| (s.k, s.n, s.m)).collect();
    let missing: Vec<_> = want.difference(&got).copied().collect();
    let extra: Vec<Solution> = found
        .iter()
        .filter(|s| !want.contains(&(s.k, s.n, s.m)))
        .cloned()
        .collect();
    let pass = missing.is_empty() && extra.is_empty();
    Theorem2Report {
        caps,
        found,
        missing,
        extra,
        pass,
    }
}

/// Searches the box and checks the result against the expected solution set.
pub fn verify_theorem2(caps: SearchCaps) -> Result<Theorem2Report> {
    let sols = intersect_bruteforce(2, caps.k_max.max(2), caps.n_max, caps.m_max)?;
    Ok(check_theorem2(caps, &sols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(s: &[Solution]) -> Vec<(u32, u64, u64)> {
        s.iter().filter(|s| !s.trivial).map(|s| (s.k, s.n, s.m)).collect()
    }

    #[test]
    fn small_k_hits() {
        let s = intersect_bruteforce(2, 3, 200, 300).unwrap();
        let t = triples(&s);
        assert!(t.contains(&(2, 4, 5)) && t.contains(&(3, 6, 9)));
        let v = s.iter().find(|s| (s.k, s.n, s.m) == (3, 6, 9)).unwrap();
        assert_eq!(v.value, SeqValue::from(13u32));
    }

    #[test]
    fn k10_only_one_nontrivial() {
        let s = intersect_bruteforce(10, 10, 200, 300).unwrap();
        assert_eq!(triples(&s), vec![(10, 4, 6)]);
    }

    #[test]
    fn initial_segment_is_trivial() {
        let s = intersect_bruteforce(2, 2, 3, 4).unwrap();
        assert!(s.iter().all(|s| s.trivial));
        let pairs: Vec<_> = s.iter().map(|s| (s.n, s.m)).collect();
        assert_eq!(pairs, TRIVIAL_PAIRS.to_vec());
    }

    #[test]
    fn merge_matches_all_pairs() {
        for k in 2..12 {
            let a = intersect_with(&Merge, k, k, 60, 90).unwrap();
            let b = intersect_with(&AllPairs, k, k, 60, 90).unwrap();
            assert_eq!(a, b, "k = {k}");
        }
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(narayana_powers_of_two(100, false), vec![(4, 1), (6, 2)]);
        assert_eq!(narayana_powers_of_two(3, true), vec![(1, 0), (2, 0), (3, 0)]);
        assert!(narayana_powers_of_two(3, false).is_empty());
    }

    #[test]
    fn theorem2_box_reports_fibonacci_thirteen() {
        let caps = SearchCaps { k_max: 5, n_max: 50, m_max: 80 };
        let r = verify_theorem2(caps).unwrap();
        assert!(r.missing.is_empty());
        let extra: Vec<_> = r.extra.iter().map(|s| (s.k, s.n, s.m)).collect();
        assert_eq!(extra, vec![(2, 7, 9)]);
        assert!(!r.pass);
    }

    #[test]
    fn injected_and_dropped_solutions_are_reported() {
        let caps = SearchCaps { k_max: 5, n_max: 50, m_max: 80 };
        let mut sols: Vec<Solution> = expected_solutions(&caps)
            .into_iter()
            .map(|(k, n, m)| Solution::new(k, n, m, k_fib_table(k, n as usize).unwrap()[n as usize].clone()))
            .collect();
        assert!(check_theorem2(caps, &sols).pass);
        sols.push(Solution::new(4, 7, 11, SeqValue::from(7u32)));
        let bad = check_theorem2(caps, &sols);
        assert!(!bad.pass);
        assert_eq!(bad.extra.len(), 1);
        sols.retain(|s| (s.k, s.n, s.m) != (3, 6, 9));
        assert_eq!(check_theorem2(caps, &sols).missing, vec![(3, 6, 9)]);
    }
}
