//! Per-row aggregates over all `n^{m-1}` entries of a row, computed from the
//! canonical storage in one pass.

use crate::error::Result;
use crate::sos::is_diagonal_exponent;
use crate::tensor::SymmetricTensor;

#[derive(Clone, Debug, Default)]
pub(crate) struct RowStats {
    pub diag: f64,
    pub sum: f64,
    /// Sum of `|a|` over off-diagonal positions.
    pub off_abs: f64,
    /// Same, restricted to positions whose monomial is negative or odd.
    pub off_abs_delta: f64,
    /// Largest off-diagonal entry, counting implicit zeros.
    pub off_max: f64,
}

/// `n^{m-1}`, saturating.
pub(crate) fn row_len(m: usize, n: usize) -> u128 {
    (n as u128).checked_pow((m - 1) as u32).unwrap_or(u128::MAX)
}

pub(crate) fn row_stats(a: &SymmetricTensor) -> Result<Vec<RowStats>> {
    let n = a.dim();
    let m = a.order();
    let mut st = vec![RowStats::default(); n];
    let mut stored: Vec<u128> = vec![0; n];
    let mut max_stored = vec![f64::NEG_INFINITY; n];
    for (idx, &v) in a.iter() {
        if idx.is_diagonal() {
            let i = idx.as_slice()[0] as usize;
            st[i].diag = v;
            st[i].sum += v;
            continue;
        }
        let alpha = idx.exponents(n);
        let in_delta = !is_diagonal_exponent(&alpha) && (v < 0.0 || alpha.iter().any(|e| e % 2 == 1));
        for (i, _) in idx.counts() {
            let r = idx.row_multiplicity(i)?;
            let rf = r as f64;
            st[i].sum += rf * v;
            st[i].off_abs += rf * v.abs();
            if in_delta {
                st[i].off_abs_delta += rf * v.abs();
            }
            stored[i] = stored[i].saturating_add(r);
            max_stored[i] = max_stored[i].max(v);
        }
    }
    let total_off = row_len(m, n).saturating_sub(1);
    for i in 0..n {
        let implicit_zero = stored[i] < total_off;
        st[i].off_max = if implicit_zero { max_stored[i].max(0.0) } else { max_stored[i] };
        if !st[i].off_max.is_finite() {
            // dimension one: no off-diagonal positions
            st[i].off_max = 0.0;
        }
    }
    Ok(st)
}

/// `a >= b` up to a relative tolerance.
pub(crate) fn ge(a: f64, b: f64) -> bool {
    a >= b - 1e-12 * (1.0 + a.abs() + b.abs())
}
