//! SOS-rank bounds: the universal `Lambda` bound and the bounded-exponent one.

use serde::{Deserialize, Serialize};

use crate::tensor::index::binomial;
use crate::tensor::{Scalar, SymmetricTensor};

/// `(sqrt(1 + 8a) - 1) / 2` with `a = C(n+m-1, m)`.
pub fn lambda_bound(m: usize, n: usize) -> f64 {
    let a = binomial((n + m - 1) as u64, m as u64).map(|a| a as f64).unwrap_or(f64::INFINITY);
    ((1.0 + 8.0 * a).sqrt() - 1.0) / 2.0
}

/// Largest single-index exponent over the nonzero entries, i.e. the smallest
/// `e` with the tensor in `BD^e`.
pub fn bd_exponent<T: Scalar>(a: &SymmetricTensor<T>) -> u32 {
    a.iter()
        .flat_map(|(idx, _)| idx.counts().into_iter().map(|(_, c)| c))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankBounds {
    pub observed: usize,
    pub lambda: f64,
    /// `n` when the bounded-exponent hypotheses hold, `1` when in addition
    /// `m = e n`.
    pub bd: Option<usize>,
    /// Even exponent used for the bounded-exponent test.
    pub exponent: u32,
}

impl RankBounds {
    pub fn holds(&self) -> bool {
        self.observed as f64 <= self.lambda.ceil() && self.bd.is_none_or(|b| self.observed <= b)
    }
}

/// Bounded-exponent hypothesis: `n >= 3`, `e` and `m` even, `m >= 4`, and
/// either `n >= 4, m >= e n - 2` or `n = 3, (m = 4 or m >= 3e - 4)`.
pub fn bd_bound(m: usize, n: usize, e: u32) -> Option<usize> {
    let e = e as usize;
    if n < 3 || m < 4 || !m.is_multiple_of(2) || !e.is_multiple_of(2) || e == 0 {
        return None;
    }
    let ok = (n >= 4 && m + 2 >= e * n) || (n == 3 && (m == 4 || m + 4 >= 3 * e));
    if !ok {
        return None;
    }
    Some(if m == e * n { 1 } else { n })
}

/// Bounds applicable to a tensor whose certificate has `observed` squares.
pub fn sos_rank_bounds<T: Scalar>(a: &SymmetricTensor<T>, observed: usize) -> RankBounds {
    let raw = bd_exponent(a);
    let e = raw + raw % 2;
    RankBounds {
        observed,
        lambda: lambda_bound(a.order(), a.dim()),
        bd: bd_bound(a.order(), a.dim(), e),
        exponent: e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lambda_values() {
        assert_abs_diff_eq!(lambda_bound(4, 3), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_bound(4, 2), (41f64.sqrt() - 1.0) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_bound(4, 2), 2.7016, epsilon = 1e-4);
        assert_abs_diff_eq!(lambda_bound(4, 4), (281f64.sqrt() - 1.0) / 2.0, epsilon = 1e-12);
        for n in 1..12 {
            assert_abs_diff_eq!(lambda_bound(2, n), n as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn bounded_exponent_hypotheses() {
        assert_eq!(bd_bound(6, 3, 2), Some(1));
        assert_eq!(bd_bound(4, 3, 2), Some(3));
        assert_eq!(bd_bound(6, 4, 2), Some(4));
        assert_eq!(bd_bound(8, 4, 2), Some(1));
        assert_eq!(bd_bound(4, 4, 4), None);
        assert_eq!(bd_bound(4, 2, 2), None);
    }
}
