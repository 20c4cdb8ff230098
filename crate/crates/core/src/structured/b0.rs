//! B0 tensors and their split into a dominated M-part plus partial all-one
//! tensors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structured::dominance::is_diagonally_dominated;
use crate::structured::rows::{ge, row_len, row_stats};
use crate::tensor::index::all_canonical;
use crate::tensor::{MultiIndex, SymmetricTensor};

/// Every row sum is nonnegative and its mean (over `n^{m-1}` positions)
/// bounds every off-diagonal entry of the row.
pub fn is_b0(a: &SymmetricTensor) -> Result<bool> {
    let len = row_len(a.order(), a.dim()) as f64;
    Ok(row_stats(a)?.iter().all(|r| ge(r.sum, 0.0) && ge(r.sum / len, r.off_max)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct B0Split {
    /// Diagonally dominated Z-part.
    pub m_part: SymmetricTensor,
    /// `(h_k, J_k)`, `J_k` 1-based and nested: `J_1 ⊆ J_2 ⊆ ...`.
    pub terms: Vec<(f64, Vec<usize>)>,
}

/// Writes a B0 tensor as `M + sum_k h_k E^{J_k}`.
///
/// With `p_i = max(0, largest off-diagonal entry of row i)` and distinct
/// positive levels `q_1 > ... > q_t`, take `J_k = {i : p_i >= q_k}` and
/// `h_k = q_k - q_{k+1}`. An off-diagonal entry with index set `S` loses
/// `min_{i in S} p_i`, at least its own value, so `M` is a Z-tensor; row `i`
/// loses at most `n^{m-1} p_i`, which the B0 condition covers.
pub fn b0_split(a: &SymmetricTensor) -> Result<B0Split> {
    if !is_b0(a)? {
        return Err(Error::InvalidParameter("tensor is not B0".into()));
    }
    let (m, n) = (a.order(), a.dim());
    let stats = row_stats(a)?;
    let p: Vec<f64> = stats.iter().map(|r| r.off_max.max(0.0)).collect();
    let mut levels: Vec<f64> = p.iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(|x, y| y.partial_cmp(x).unwrap());
    levels.dedup();
    let mut terms = Vec::new();
    for (k, &q) in levels.iter().enumerate() {
        let next = levels.get(k + 1).copied().unwrap_or(0.0);
        let j: Vec<usize> = (0..n).filter(|&i| p[i] >= q).map(|i| i + 1).collect();
        terms.push((q - next, j));
    }
    // The h_k telescope to min_{i in S} p_i on an index set S; subtracting
    // that value directly keeps off-diagonal entries exactly nonpositive.
    let support: Vec<usize> = (0..n).filter(|&i| p[i] > 0.0).collect();
    let mut m_part = a.clone();
    for idx in all_canonical(m, support.len()) {
        let mapped = MultiIndex::from_unsorted(idx.as_slice().iter().map(|&k| support[k as usize] as u32).collect());
        let shift = mapped.as_slice().iter().map(|&i| p[i as usize]).fold(f64::INFINITY, f64::min);
        let v = m_part.get_canonical(&mapped) - shift;
        m_part.set_canonical(mapped, v);
    }
    debug_assert!(is_diagonally_dominated(&m_part).unwrap_or(false));
    Ok(B0Split { m_part, terms })
}
