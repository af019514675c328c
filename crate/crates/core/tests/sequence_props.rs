use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

use kfib_narayana::algebraic::{dominant_root_alpha, f_k_alpha, narayana_constants};
use kfib_narayana::real::AdaptiveReal;
use kfib_narayana::sequences::{k_fib, k_fib_table, narayana_table, seq_iter, SequenceKind};

fn ball(v: &BigUint) -> AdaptiveReal {
    AdaptiveReal::from_int(BigInt::from(v.clone()))
}

#[test]
fn monotone_scans_to_ten_thousand() {
    let nar = narayana_table(10_000);
    assert!(nar[3..].windows(2).all(|w| w[0] < w[1]));
    for k in [2u32, 3, 7, 40] {
        let f = k_fib_table(k, 10_000).unwrap();
        assert!(f[2..].windows(2).all(|w| w[0] < w[1]), "k = {k}");
    }
}

#[test]
fn power_of_two_prefix() {
    for k in 2u32..=64 {
        let f = k_fib_table(k, k as usize + 2).unwrap();
        for n in 2..=(k as usize + 1) {
            assert_eq!(f[n], BigUint::one() << (n - 2), "k = {k}, n = {n}");
        }
        assert_eq!(f[k as usize + 2], (BigUint::one() << k) - 1u32, "k = {k}");
    }
}

#[test]
fn kfib_growth_between_alpha_powers() {
    for k in 2u32..=20 {
        let alpha = dominant_root_alpha(k, 256).unwrap();
        let f = k_fib_table(k, 200).unwrap();
        for n in 1..=200i64 {
            let v = ball(&f[n as usize]);
            let lo = alpha.powi(n - 2).unwrap();
            let hi = alpha.powi(n - 1).unwrap();
            assert!(lo.upper() <= v.lower(), "k = {k}, n = {n}: lower bound");
            assert!(v.upper() <= hi.lower(), "k = {k}, n = {n}: upper bound");
        }
    }
}

/// `lambda^(m-1)` is an upper bound for every `m >= 1`, and `lambda^(m-3)`
/// a lower bound. The sharper lower bound `lambda^(m-2)` fails for every
/// `m >= 3`, starting with `N_3 = 1 < lambda`.
#[test]
fn narayana_growth_bounds() {
    let lambda = narayana_constants(256).unwrap().lambda;
    let nar = narayana_table(300);
    let mut literal_failures = Vec::new();
    for m in 1..=300i64 {
        let v = ball(&nar[m as usize]);
        assert!(v.upper() <= lambda.powi(m - 1).unwrap().lower(), "m = {m}");
        assert!(lambda.powi(m - 3).unwrap().upper() <= v.lower(), "m = {m}");
        if lambda.powi(m - 2).unwrap().gt(&v) {
            literal_failures.push(m);
        }
    }
    assert_eq!(literal_failures, (3..=300).collect::<Vec<_>>());
}

#[test]
fn dominant_term_within_half() {
    let half = AdaptiveReal::from_f64(0.5);
    for k in 2u32..=20 {
        let alpha = dominant_root_alpha(k, 512).unwrap();
        let fk = f_k_alpha(k, &alpha).unwrap();
        let f = k_fib_table(k, 150).unwrap();
        for n in 1..=150i64 {
            let approx = fk.mul(&alpha.powi(n - 1).unwrap());
            let gap = ball(&f[n as usize]).sub(&approx).abs();
            assert!(gap.lt(&half), "k = {k}, n = {n}: gap {gap}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_holds(k in 2u32..40, n in 2i64..300) {
        let window: BigUint = (1..=k as i64).map(|j| k_fib(k, n - j).unwrap()).sum();
        prop_assert_eq!(k_fib(k, n).unwrap(), window);
    }

    #[test]
    fn narayana_recurrence(m in 3i64..2000) {
        let nar = narayana_table(m as usize);
        let m = m as usize;
        prop_assert_eq!(&nar[m], &(&nar[m - 1] + &nar[m - 3]));
    }

    #[test]
    fn iterator_start_is_irrelevant(k in 2u32..30, from in 0i64..200, len in 1usize..50) {
        let direct: Vec<_> = seq_iter(SequenceKind::KFib { k }, from).unwrap().take(len).collect();
        let table = k_fib_table(k, from as usize + len).unwrap();
        for (i, (idx, v)) in direct.iter().enumerate() {
            prop_assert_eq!(*idx, from + i as i64);
            prop_assert_eq!(v, &table[from as usize + i]);
        }
    }
}
