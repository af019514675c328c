//! Exact generation of the k-generalized Fibonacci numbers `F_n^(k)` and of
//! Narayana's cows numbers `N_m`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sequence terms are always exact.
pub type SeqValue = BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `F_n = F_{n-1} + ... + F_{n-k}`, with `F_{-(k-2)} = ... = F_0 = 0`, `F_1 = 1`.
    KFib { k: u32 },
    /// `N_m = N_{m-1} + N_{m-3}`, with `N_0 = 0`, `N_1 = N_2 = 1`.
    Narayana,
}

impl SequenceKind {
    pub fn k_fib(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("k-Fibonacci order must be >= 2, got {k}")));
        }
        Ok(SequenceKind::KFib { k })
    }

    /// Smallest index at which the sequence is defined.
    pub fn first_index(&self) -> i64 {
        match *self {
            SequenceKind::KFib { k } => -(k as i64 - 2),
            SequenceKind::Narayana => 0,
        }
    }

    fn check_index(&self, index: i64) -> Result<()> {
        if index < self.first_index() {
            return Err(Error::Domain(format!(
                "index {index} below the initial window of {self:?} (first index {})",
                self.first_index()
            )));
        }
        Ok(())
    }
}

/// Lazily yields `(index, value)` pairs, keeping only the recurrence window.
#[derive(Clone, Debug)]
pub struct SeqIter {
    kind: SequenceKind,
    /// The last `order` terms, ending at index `last`.
    window: VecDeque<BigUint>,
    /// Running window sum (k-Fibonacci only).
    sum: BigUint,
    last: i64,
    next_index: i64,
}

impl SeqIter {
    pub fn new(kind: SequenceKind, from: i64) -> Result<Self> {
        if let SequenceKind::KFib { k } = kind {
            SequenceKind::k_fib(k)?;
        }
        kind.check_index(from)?;
        let (window, last) = match kind {
            SequenceKind::KFib { k } => {
                let mut w: VecDeque<BigUint> = (0..k - 1).map(|_| BigUint::zero()).collect();
                w.push_back(BigUint::one());
                (w, 1)
            }
            SequenceKind::Narayana => (
                [0u32, 1, 1].into_iter().map(BigUint::from).collect(),
                2,
            ),
        };
        let sum = window.iter().sum();
        let mut it = SeqIter {
            kind,
            window,
            sum,
            last,
            next_index: from,
        };
        while it.last < from - 1 {
            it.advance();
        }
        Ok(it)
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    fn advance(&mut self) {
        let next = match self.kind {
            SequenceKind::KFib { .. } => {
                let next = self.sum.clone();
                let oldest = self.window.pop_front().unwrap();
                self.sum = &self.sum + &next - oldest;
                next
            }
            SequenceKind::Narayana => {
                let next = &self.window[2] + &self.window[0];
                self.window.pop_front();
                next
            }
        };
        self.window.push_back(next);
        self.last += 1;
    }

    fn known(&self, index: i64) -> BigUint {
        let order = self.window.len() as i64;
        let first_in_window = self.last - order + 1;
        if index >= first_in_window {
            self.window[(index - first_in_window) as usize].clone()
        } else {
            // Only reachable for the zero prefix of the k-Fibonacci window.
            BigUint::zero()
        }
    }
}

impl Iterator for SeqIter {
    type Item = (i64, SeqValue);

    fn next(&mut self) -> Option<Self::Item> {
        let idx = self.next_index;
        if idx > self.last {
            self.advance();
        }
        let v = self.known(idx);
        self.next_index += 1;
        Some((idx, v))
    }
}

pub fn seq_iter(kind: SequenceKind, from: i64) -> Result<SeqIter> {
    SeqIter::new(kind, from)
}

/// `F_n^(k)`, defined for `k >= 2` and `n >= -(k-2)`.
pub fn k_fib(k: u32, n: i64) -> Result<SeqValue> {
    let kind = SequenceKind::k_fib(k)?;
    kind.check_index(n)?;
    Ok(SeqIter::new(kind, n)?.next().unwrap().1)
}

/// `N_m`, defined for `m >= 0`.
pub fn narayana(m: i64) -> Result<SeqValue> {
    SequenceKind::Narayana.check_index(m)?;
    Ok(SeqIter::new(SequenceKind::Narayana, m)?.next().unwrap().1)
}

/// `N_0 ..= N_{m_max}` as a vector.
pub fn narayana_table(m_max: usize) -> Vec<SeqValue> {
    SeqIter::new(SequenceKind::Narayana, 0)
        .unwrap()
        .take(m_max + 1)
        .map(|(_, v)| v)
        .collect()
}

/// `F_0^(k) ..= F_{n_max}^(k)` as a vector.
pub fn k_fib_table(k: u32, n_max: usize) -> Result<Vec<SeqValue>> {
    Ok(SeqIter::new(SequenceKind::k_fib(k)?, 0)?
        .take(n_max + 1)
        .map(|(_, v)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn k_fib_examples() {
        assert_eq!(k_fib(2, 4).unwrap(), u(3));
        assert_eq!(k_fib(3, 6).unwrap(), u(13));
        assert_eq!(k_fib(5, 7).unwrap(), u(31));
        assert_eq!(k_fib(4, 4).unwrap(), u(4));
        assert_eq!(k_fib(7, 0).unwrap(), u(0));
    }

    #[test]
    fn k_fib_negative_window() {
        assert_eq!(k_fib(7, -5).unwrap(), u(0));
        assert!(matches!(k_fib(7, -6), Err(Error::Domain(_))));
        assert!(matches!(k_fib(2, -1), Err(Error::Domain(_))));
        assert!(matches!(k_fib(1, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn narayana_examples() {
        assert_eq!(narayana(4).unwrap(), u(2));
        assert_eq!(narayana(9).unwrap(), u(13));
        assert_eq!(narayana(0).unwrap(), u(0));
        assert!(matches!(narayana(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn iterator_prefixes() {
        let nar: Vec<u64> = seq_iter(SequenceKind::Narayana, 0)
            .unwrap()
            .take(10)
            .map(|(_, v)| v.try_into().unwrap())
            .collect();
        assert_eq!(nar, vec![0, 1, 1, 1, 2, 3, 4, 6, 9, 13]);

        let fib: Vec<u64> = seq_iter(SequenceKind::KFib { k: 2 }, 1)
            .unwrap()
            .take(6)
            .map(|(_, v)| v.try_into().unwrap())
            .collect();
        assert_eq!(fib, vec![1, 1, 2, 3, 5, 8]);

        let trib: Vec<u64> = seq_iter(SequenceKind::KFib { k: 3 }, 1)
            .unwrap()
            .take(6)
            .map(|(_, v)| v.try_into().unwrap())
            .collect();
        assert_eq!(trib, vec![1, 1, 2, 4, 7, 13]);
    }

    #[test]
    fn iterator_indices_start_at_from() {
        let mut it = seq_iter(SequenceKind::KFib { k: 4 }, -2).unwrap();
        let first: Vec<i64> = it.by_ref().take(4).map(|(i, _)| i).collect();
        assert_eq!(first, vec![-2, -1, 0, 1]);
        assert_eq!(it.next().unwrap(), (2, u(1)));
    }

    #[test]
    fn starting_midway_matches_full_scan() {
        let full: Vec<_> = seq_iter(SequenceKind::KFib { k: 5 }, -3).unwrap().take(60).collect();
        let mid: Vec<_> = seq_iter(SequenceKind::KFib { k: 5 }, 20).unwrap().take(10).collect();
        assert_eq!(&full[23..33], &mid[..]);
    }
}
