//! Canonical (sorted) multi-indices and their permutation counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 30;

/// A sorted, 0-based multi-index. Every permutation of the same multiset maps
/// to one canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Builds from 0-based indices in any order.
    pub fn from_unsorted(mut idx: Vec<u32>) -> Self {
        idx.sort_unstable();
        MultiIndex(idx)
    }

    /// The index `i` repeated `m` times.
    pub fn diagonal(i: usize, m: usize) -> Self {
        MultiIndex(vec![i as u32; m])
    }

    /// Inverse of [`MultiIndex::exponents`].
    pub fn from_exponents(alpha: &[u32]) -> Self {
        let mut v = Vec::with_capacity(alpha.iter().sum::<u32>() as usize);
        for (i, &a) in alpha.iter().enumerate() {
            v.extend(std::iter::repeat_n(i as u32, a as usize));
        }
        MultiIndex(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// 1-based indices, for display and file output.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    /// Exponent vector: `alpha[i]` counts occurrences of `i`.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut a = vec![0u32; n];
        for &i in &self.0 {
            a[i as usize] += 1;
        }
        a
    }

    /// Run-length encoding as `(index, count)` pairs.
    pub fn counts(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some((j, c)) if *j == i as usize => *c += 1,
                _ => out.push((i as usize, 1)),
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&(i as u32)).is_ok()
    }

    /// Distinct indices, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.counts().into_iter().map(|(i, _)| i).collect()
    }

    /// Number of distinct orderings of this multiset: `m! / prod(count!)`.
    pub fn multiplicity(&self) -> Result<u128> {
        multinomial(self.counts().iter().map(|&(_, c)| c), self.order())
    }

    /// Number of tails `(i2..im)` such that `(i, i2..im)` is a permutation of
    /// this index. Zero when `i` does not occur.
    pub fn row_multiplicity(&self, i: usize) -> Result<u128> {
        let counts = self.counts();
        if !counts.iter().any(|&(j, _)| j == i) {
            return Ok(0);
        }
        let reduced = counts.iter().map(|&(j, c)| if j == i { c - 1 } else { c });
        multinomial(reduced, self.order())
    }

    /// Removes one occurrence of `i`; `None` if absent.
    pub fn without_one(&self, i: usize) -> Option<MultiIndex> {
        let pos = self.0.binary_search(&(i as u32)).ok()?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }
}

fn multinomial(counts: impl Iterator<Item = u32>, order: usize) -> Result<u128> {
    let mut total: u128 = 0;
    let mut result: u128 = 1;
    for c in counts {
        for j in 0..c as u128 {
            total += 1;
            // result * C(total, j+1) built incrementally stays integral
            result = result
                .checked_mul(total)
                .ok_or(Error::MultiplicityOverflow(order))?
                / (j + 1);
        }
    }
    Ok(result)
}

/// Sorts 1-based indices into canonical 0-based form and returns the
/// multiplicity of the index class.
pub fn canonicalize(indices: &[usize], n: usize) -> Result<(MultiIndex, u128)> {
    if indices.is_empty() || indices.len() > MAX_ORDER {
        return Err(Error::UnsupportedOrder(indices.len()));
    }
    let mut v = Vec::with_capacity(indices.len());
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        v.push((i - 1) as u32);
    }
    let idx = MultiIndex::from_unsorted(v);
    let mult = idx.multiplicity()?;
    Ok((idx, mult))
}

/// All canonical multi-indices of order `m` over `n` symbols, ascending.
pub fn all_canonical(m: usize, n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    if n == 0 {
        return out;
    }
    loop {
        out.push(MultiIndex(cur.clone()));
        // next non-decreasing sequence
        let mut k = m;
        while k > 0 && cur[k - 1] as usize == n - 1 {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        let v = cur[k - 1] + 1;
        for c in cur.iter_mut().skip(k - 1) {
            *c = v;
        }
    }
}

/// Binomial coefficient in `u128`, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for j in 0..k as u128 {
        r = r.checked_mul(n as u128 - j)? / (j + 1);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_sorts_and_counts() {
        let (idx, mult) = canonicalize(&[2, 1, 1, 2], 2).unwrap();
        assert_eq!(idx.one_based(), vec![1, 1, 2, 2]);
        assert_eq!(mult, 6);
    }

    #[test]
    fn canonicalize_rejects_out_of_range() {
        assert_eq!(
            canonicalize(&[1, 3], 2),
            Err(Error::IndexOutOfRange { index: 3, dim: 2 })
        );
        assert!(canonicalize(&[0, 1], 2).is_err());
    }

    #[test]
    fn multiplicity_at_order_thirty_is_exact() {
        // 30 distinct symbols: 30!
        let idx = MultiIndex::from_unsorted((0..30).collect());
        let fact30: u128 = (1..=30u128).product();
        assert_eq!(idx.multiplicity().unwrap(), fact30);
        // 15 + 15 split: C(30,15)
        let (idx, mult) = canonicalize(&[[1usize; 15], [2usize; 15]].concat(), 2).unwrap();
        assert_eq!(idx.order(), 30);
        assert_eq!(mult, 155_117_520);
    }

    #[test]
    fn row_multiplicity_counts_tails() {
        let idx = MultiIndex::from_unsorted(vec![0, 0, 1, 1]);
        assert_eq!(idx.row_multiplicity(0).unwrap(), 3);
        assert_eq!(idx.row_multiplicity(1).unwrap(), 3);
        assert_eq!(idx.row_multiplicity(2).unwrap(), 0);
    }

    #[test]
    fn enumeration_has_binomial_size() {
        for (m, n) in [(4usize, 3usize), (6, 4), (3, 5)] {
            let all = all_canonical(m, n);
            assert_eq!(all.len() as u128, binomial((n + m - 1) as u64, m as u64).unwrap());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exponents_round_trip() {
        let idx = MultiIndex::from_unsorted(vec![3, 0, 3, 1]);
        let a = idx.exponents(4);
        assert_eq!(a, vec![1, 1, 0, 2]);
        assert_eq!(MultiIndex::from_exponents(&a), idx);
    }
}
