//! Binomial coefficients and k-subset enumeration.
//!
//! Subsets are sorted `Vec<usize>` over `0..n`; enumeration and ranking both
//! follow lexicographic order so that constructions built on top of them are
//! reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `C(n, k)` as a big integer, with `C(n, k) = 0` whenever `k < 0`, `k > n`
/// or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        // acc * (n - j) is always divisible by (j + 1) at this point.
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Checked machine-word binomial, for sizes and ranks.
pub fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets {
        n,
        current: if k <= n { Some((0..k).collect()) } else { None },
    }
}

/// Iterator returned by [`k_subsets`].
#[derive(Clone, Debug)]
pub struct KSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // Rightmost position that can still be incremented.
        let mut pos = None;
        for i in (0..k).rev() {
            if next[i] < self.n - k + i {
                pos = Some(i);
                break;
            }
        }
        if let Some(i) = pos {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Zero-based lexicographic rank of a sorted subset among all subsets of
/// `0..n` with the same size.
pub fn subset_rank(n: usize, subset: &[usize]) -> u64 {
    let m = subset.len();
    let mut rank = 0u64;
    let mut start = 0usize;
    for (i, &c) in subset.iter().enumerate() {
        for v in start..c {
            rank += binomial_u64(n - 1 - v, m - 1 - i).expect("rank overflow");
        }
        start = c + 1;
    }
    rank
}

/// Least common multiple of `1..=n` (1 for `n = 0`).
pub fn lcm_upto(n: u64) -> u64 {
    (1..=n).fold(1u64, |acc, x| acc.lcm(&x))
}
